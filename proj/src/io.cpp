#include "mcvar/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stencil.hpp"

namespace mcvar {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_csv(const std::string& path, const ScalarField& f) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const Grid& g = *f.grid;
    out << (g.n == 2 ? "x,y,value\n" : "x,value\n");
    for (int c = 0; c < g.num_nodes(); ++c) {
        const int l = g.lattice_of[c];
        out << num(g.x_of_lat(l));
        if (g.n == 2) out << ',' << num(g.y_of_lat(l));
        out << ',' << num(f.values[static_cast<std::size_t>(c)]) << '\n';
    }
}

ScalarField read_csv(const std::string& path, const GridPtr& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV '" + path + "'");
    const std::string expect = grid->n == 2 ? "x,y,value" : "x,value";
    if (line.substr(0, expect.size()) != expect)
        throw IoError("CSV header mismatch in '" + path + "': expected " + expect);

    ScalarField f(grid, 0.0);
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= grid->num_nodes()) throw IoError("CSV has more rows than grid nodes");
        const auto last = line.rfind(',');
        if (last == std::string::npos) throw IoError("malformed CSV row: " + line);
        f.values[static_cast<std::size_t>(row)] = std::stod(line.substr(last + 1));
        ++row;
    }
    if (row != grid->num_nodes())
        throw IoError("CSV row count " + std::to_string(row) + " does not match the grid (" +
                      std::to_string(grid->num_nodes()) + " nodes)");
    return f;
}

namespace {

struct ObjBuilder {
    std::vector<std::array<double, 3>> verts;
    std::vector<std::array<double, 3>> normals;
    std::vector<std::vector<int>> polys; // 1-based obj indices
};

void vertex_normal(const Grid& g, const ScalarField& u, int c, std::array<double, 3>& nrm) {
    double du[2];
    stencil::grad_at_compact(g, u, c, du);
    const double D = std::sqrt(1 + du[0] * du[0] + (g.n == 2 ? du[1] * du[1] : 0.0));
    nrm = {-du[0] / D, g.n == 2 ? -du[1] / D : 0.0, 1.0 / D};
}

} // namespace

void write_obj(const std::string& path, const ScalarField& u) {
    const Grid& g = *u.grid;
    if (!u.has_trace()) throw IoError("OBJ export needs the trace of u");
    ObjBuilder b;

    // vertices: non-exterior lattice nodes, then boundary sites
    std::vector<int> node_vert(static_cast<std::size_t>(g.num_nodes()));
    for (int c = 0; c < g.num_nodes(); ++c) {
        const int l = g.lattice_of[c];
        b.verts.push_back({g.x_of_lat(l), g.n == 2 ? g.y_of_lat(l) : 0.0,
                           u.values[static_cast<std::size_t>(c)]});
        std::array<double, 3> nrm;
        vertex_normal(g, u, c, nrm);
        b.normals.push_back(nrm);
        node_vert[static_cast<std::size_t>(c)] = static_cast<int>(b.verts.size());
    }
    std::vector<int> site_vert(static_cast<std::size_t>(g.num_sites()), 0);
    for (int s = 0; s < g.num_sites(); ++s) {
        const auto& bs = g.sites[s];
        if (bs.lattice >= 0 && g.compact_of[bs.lattice] >= 0) {
            site_vert[static_cast<std::size_t>(s)] =
                node_vert[static_cast<std::size_t>(g.compact_of[bs.lattice])];
            continue;
        }
        b.verts.push_back({bs.x, bs.y, u.trace[static_cast<std::size_t>(s)]});
        b.normals.push_back({0, 0, 1}); // refined below from the owning node
        site_vert[static_cast<std::size_t>(s)] = static_cast<int>(b.verts.size());
    }
    // copy normals to cut sites from the arm owner
    for (int q = 0; q < g.num_interior(); ++q) {
        for (int dir = 0; dir < 2 * g.n; ++dir) {
            const Arm& a = g.arm(q, dir);
            if (a.site < 0) continue;
            const int v = site_vert[static_cast<std::size_t>(a.site)] - 1;
            std::array<double, 3> nrm;
            vertex_normal(g, u, g.compact_of_int[q], nrm);
            b.normals[static_cast<std::size_t>(v)] = nrm;
        }
    }

    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    if (g.n == 1) {
        for (std::size_t v = 0; v < b.verts.size(); ++v)
            out << "v " << num(b.verts[v][0]) << " " << num(b.verts[v][2]) << " 0\n";
        out << "l";
        for (int c = 0; c < g.num_nodes(); ++c) out << ' ' << node_vert[static_cast<std::size_t>(c)];
        out << '\n';
        return;
    }

    // faces: clip each lattice cell against the domain
    auto arm_site = [&](int c_from, int dir) -> int {
        const int q = g.interior_of[c_from];
        if (q < 0) return -1;
        return g.arm(q, dir).site;
    };
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const int corner_lat[4] = {g.lat(i, j), g.lat(i + 1, j), g.lat(i + 1, j + 1),
                                       g.lat(i, j + 1)};
            // direction of the edge leaving corner k, as an arm direction
            const int edge_dir[4] = {1, 3, 0, 2}; // E, N, W, S
            std::vector<int> poly;
            for (int k = 0; k < 4; ++k) {
                const int ca = g.compact_of[corner_lat[k]];
                const int cb = g.compact_of[corner_lat[(k + 1) % 4]];
                if (ca >= 0) poly.push_back(node_vert[static_cast<std::size_t>(ca)]);
                if (ca >= 0 && cb < 0) {
                    const int s = arm_site(ca, edge_dir[k]);
                    if (s >= 0) poly.push_back(site_vert[static_cast<std::size_t>(s)]);
                } else if (ca < 0 && cb >= 0) {
                    const int s = arm_site(cb, edge_dir[k] ^ 1); // opposite direction
                    if (s >= 0) poly.push_back(site_vert[static_cast<std::size_t>(s)]);
                }
            }
            if (poly.size() >= 3) b.polys.push_back(poly);
        }
    }

    for (std::size_t v = 0; v < b.verts.size(); ++v)
        out << "v " << num(b.verts[v][0]) << ' ' << num(b.verts[v][1]) << ' '
            << num(b.verts[v][2]) << '\n';
    for (std::size_t v = 0; v < b.normals.size(); ++v)
        out << "vn " << num(b.normals[v][0]) << ' ' << num(b.normals[v][1]) << ' '
            << num(b.normals[v][2]) << '\n';
    for (const auto& p : b.polys) {
        out << 'f';
        for (int v : p) out << ' ' << v << "//" << v;
        out << '\n';
    }
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& A) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << num(it.value()) << '\n';
}

namespace {

nlohmann::json admissibility_to_json(const AdmissibilityReport& rep) {
    nlohmann::json conds = nlohmann::json::array();
    for (const auto& c : rep.conditions) {
        conds.push_back({{"name", c.name},
                         {"status", c.status == CondStatus::Satisfied    ? "satisfied"
                                    : c.status == CondStatus::Borderline ? "borderline"
                                                                         : "violated"},
                         {"required", c.required},
                         {"margin", c.margin},
                         {"threshold", c.threshold},
                         {"observed", c.observed},
                         {"samples", c.samples}});
    }
    return {{"conditions", conds}, {"warnings", rep.warnings}, {"required_ok", rep.required_ok()}};
}

} // namespace

std::string admissibility_json(const AdmissibilityReport& rep) {
    return admissibility_to_json(rep).dump(2);
}

std::string report_json(const SolveReport& rep, const RunConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config"] = cfg.raw;
    j["status"] = rep.status == SolveStatus::Converged  ? "converged"
                  : rep.status == SolveStatus::MaxIters ? "max-iters"
                                                        : "pmc-failure";
    j["admissibility"] = admissibility_to_json(rep.admissibility);
    j["forced"] = rep.forced;
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& row : rep.history)
        hist.push_back({{"k", row.k},
                        {"du_inf", row.du_inf},
                        {"dH_inf", row.dH_inf},
                        {"E_simplified", row.e_simplified},
                        {"E_geometric", row.e_geometric},
                        {"newton_iters", row.newton_iters}});
    j["outer_history"] = hist;
    j["final"] = {{"E_simplified", rep.final_e_simplified},
                  {"E_geometric", rep.final_e_geometric},
                  {"diff_inf", rep.final_diff},
                  {"cert_pmc_residual", rep.cert_pmc},
                  {"cert_elliptic_residual", rep.cert_elliptic},
                  {"polish_iters", rep.polish_iters}};
    if (rep.status == SolveStatus::PmcFailure)
        j["failure"] = {{"outer_k", rep.failed_at}, {"continuation_stage", rep.failed_stage}};
    j["timing"] = {{"seconds", rep.seconds}};
    return j.dump(2);
}

void write_report(const std::string& path, const SolveReport& rep, const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << report_json(rep, cfg) << '\n';
}

} // namespace mcvar

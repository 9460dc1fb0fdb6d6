#include "rodbif/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rodbif {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: bad numeric value for '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: bad integer value for '" + key + "': " + value);
    }
}

void check_stream(const std::ofstream& out, const std::filesystem::path& file) {
    if (!out) throw ValidationError("cannot write file: " + file.string());
}

}  // namespace

ElasticConstants RunConfig::constants() const {
    if (!c12 || !c13 || !c23 || !k || !L)
        throw ValidationError("config: constants c12, c13, c23, k, L must all be set");
    return ElasticConstants(*c12, *c13, *c23, *k, *L);
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "c12") cfg.c12 = parse_double(key, value);
        else if (key == "c13") cfg.c13 = parse_double(key, value);
        else if (key == "c23") cfg.c23 = parse_double(key, value);
        else if (key == "k") cfg.k = parse_double(key, value);
        else if (key == "L") cfg.L = parse_double(key, value);
        else if (key == "f") cfg.f = parse_double(key, value);
        else if (key == "s") cfg.s = parse_double(key, value);
        else if (key == "s_max") cfg.s_max = parse_double(key, value);
        else if (key == "s_step") cfg.s_step = parse_double(key, value);
        else if (key == "radius") cfg.radius = parse_double(key, value);
        else if (key == "n") cfg.n = parse_int(key, value);
        else if (key == "seed") cfg.seed = parse_int(key, value);
        else if (key == "n_seeds") cfg.n_seeds = parse_int(key, value);
        else if (key == "n_eigs") cfg.n_eigs = parse_int(key, value);
        else if (key == "out") cfg.out = value;
        else
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot read config file: " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_cardan_csv(const CardanPath& path, const ElasticConstants& consts,
                      const std::filesystem::path& file) {
    std::ofstream out(file);
    check_stream(out, file);
    out << "t,phi1,phi2,phi3\n";
    const int n = path.n_elems();
    for (int i = 0; i <= n; ++i) {
        const double t = consts.L * i / n;
        out << fmt17(t) << ',' << fmt17(path.values(0, i)) << ',' << fmt17(path.values(1, i))
            << ',' << fmt17(path.values(2, i)) << '\n';
    }
}

std::pair<CardanPath, double> read_cardan_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot read path file: " + file.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,phi1,phi2,phi3")
        throw ValidationError("path file must start with header t,phi1,phi2,phi3");
    std::vector<Eigen::Vector4d> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        Eigen::Vector4d row;
        std::string cell;
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(ls, cell, ','))
                throw ValidationError("path file row with fewer than 4 columns");
            row[c] = parse_double("csv", trim(cell));
        }
        rows.push_back(row);
    }
    if (rows.size() < 5) throw ValidationError("path file needs at least 5 rows");
    Eigen::Matrix3Xd vals(3, rows.size());
    for (size_t i = 0; i < rows.size(); ++i) vals.col(i) = rows[i].tail<3>();
    return {CardanPath(std::move(vals)), rows.back()[0]};
}

void write_polyline_csv(const Eigen::Matrix3Xd& points, const ElasticConstants& consts,
                        const std::filesystem::path& file) {
    std::ofstream out(file);
    check_stream(out, file);
    out << "t,x,y,z\n";
    const Eigen::Index n = points.cols() - 1;
    for (Eigen::Index i = 0; i <= n; ++i) {
        const double t = consts.L * static_cast<double>(i) / static_cast<double>(n);
        out << fmt17(t) << ',' << fmt17(points(0, i)) << ',' << fmt17(points(1, i)) << ','
            << fmt17(points(2, i)) << '\n';
    }
}

void write_branch_csv(const std::vector<BranchPoint>& branch, const ElasticConstants& consts,
                      const std::filesystem::path& file,
                      const std::filesystem::path& sidecar_dir) {
    std::filesystem::create_directories(sidecar_dir);
    std::ofstream out(file);
    check_stream(out, file);
    out << "s,f,mu_min,energy_gap,phi_max\n";
    for (size_t i = 0; i < branch.size(); ++i) {
        const BranchPoint& p = branch[i];
        const double phi_max = p.path.values.cwiseAbs().maxCoeff();
        out << fmt17(p.s) << ',' << fmt17(p.f) << ',' << fmt17(p.mu_min) << ','
            << fmt17(p.energy_gap) << ',' << fmt17(phi_max) << '\n';
        char name[32];
        std::snprintf(name, sizeof(name), "point_%03zu.csv", i);
        write_cardan_csv(p.path, consts, sidecar_dir / name);
    }
}

void write_spectrum_csv(const Eigen::VectorXd& eigenvalues,
                        const std::filesystem::path& file) {
    std::ofstream out(file);
    check_stream(out, file);
    out << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        out << i << ',' << fmt17(eigenvalues[i]) << '\n';
}

void write_coo(const Eigen::SparseMatrix<double>& A, const std::filesystem::path& file) {
    std::ofstream out(file);
    check_stream(out, file);
    for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << fmt17(it.value()) << '\n';
}

std::string solve_report_json(const SolveReport& report) {
    nlohmann::ordered_json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["final_gradient_norm"] = report.final_gradient_norm;
    j["classification"] = to_string(report.classification);
    j["mu_min"] = report.mu_min;
    return j.dump(2);
}

}  // namespace rodbif

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rodbif/bifurcation.hpp"
#include "rodbif/solver.hpp"

namespace rodbif {

/// Key-value run configuration. Grammar: one `key = value` per line, `#` starts a
/// comment, blank lines ignored. Numeric keys: c12 c13 c23 k L f s s_max s_step
/// radius n_seeds n_eigs n seed; string key: out. Unknown keys are rejected.
struct RunConfig {
    std::optional<double> c12, c13, c23, k, L;
    std::optional<double> f, s, s_max, s_step, radius;
    std::optional<int> n, seed, n_seeds, n_eigs;
    std::optional<std::string> out;

    /// Constants must be fully specified; throws ValidationError otherwise.
    ElasticConstants constants() const;
};

RunConfig parse_config(const std::filesystem::path& file);
RunConfig parse_config_text(const std::string& text);

/// 17-significant-digit decimal rendering used by every CSV/JSON writer.
std::string fmt17(double v);

/// CSV with header `t,phi1,phi2,phi3`, one row per node.
void write_cardan_csv(const CardanPath& path, const ElasticConstants& consts,
                      const std::filesystem::path& file);
/// Reads the path back; L is recovered from the final t.
std::pair<CardanPath, double> read_cardan_csv(const std::filesystem::path& file);

/// CSV with header `t,x,y,z`, one row per node.
void write_polyline_csv(const Eigen::Matrix3Xd& points, const ElasticConstants& consts,
                        const std::filesystem::path& file);

/// CSV with header `s,f,mu_min,energy_gap,phi_max` plus one CardanPath CSV per point
/// in the sidecar directory (point_000.csv in row order).
void write_branch_csv(const std::vector<BranchPoint>& branch, const ElasticConstants& consts,
                      const std::filesystem::path& file,
                      const std::filesystem::path& sidecar_dir);

/// CSV with header `index,eigenvalue`.
void write_spectrum_csv(const Eigen::VectorXd& eigenvalues,
                        const std::filesystem::path& file);

/// Coordinate text format `row col value`, one entry per line (inspection aid).
void write_coo(const Eigen::SparseMatrix<double>& A, const std::filesystem::path& file);

/// SolveReport as a JSON object with the five report fields.
std::string solve_report_json(const SolveReport& report);

}  // namespace rodbif

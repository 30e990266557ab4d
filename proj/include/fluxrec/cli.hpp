#ifndef FLUXREC_CLI_HPP
#define FLUXREC_CLI_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "fluxrec/catalog.hpp"
#include "fluxrec/convergence.hpp"
#include "fluxrec/euler.hpp"

namespace fluxrec {

/// Parsed invocation of one CLI subcommand. Field defaults mirror the flag
/// defaults; the flux selector is a catalog name or, for `reconstruct`, a
/// directory of recorded profiles.
struct RunConfig {
    std::string subcommand;
    std::string flux = "exp-pair";
    std::optional<std::array<double, 4>> rect;  // u_star, u_sup, v_star, v_sup
    double T = 1.0;
    int m = 4;
    int m_min = 3;
    int m_max = 6;
    double tol = 1e-10;
    int samples_per_fan = 512;
    double margin = 0.5;
    bool all_steps = false;
    std::optional<std::pair<double, double>> left;
    std::optional<std::pair<double, double>> right;
    std::string anchors = "known";  // known | unknown | "c1,c2"
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int cells = 200;
    double cfl = 0.45;
    int sweep = 0;
    double gamma = 1.4;
    double kappa = 1.0;
    std::pair<double, double> v_range{0.8, 2.0};
};

/// Execute a subcommand and write its artifacts under out_dir.
/// Exit status: 0 success, 2 configuration error, 3 numerical failure; on
/// failure a machine-readable error JSON goes to stdout and out_dir/error.json.
int run(const RunConfig& config);

/// Observation source backed by a directory of step_%05d.json profiles, as
/// written by `observe --all-steps`.
class DirectoryObservationSource final : public ObservationSource {
public:
    explicit DirectoryObservationSource(std::string dir);

    ObservedProfile profile_for_step(int h) const override;
    int step_count() const override { return steps_; }

    /// manifest.json contents when the recording included one.
    const std::optional<nlohmann::json>& manifest() const { return manifest_; }

private:
    std::string dir_;
    int steps_ = 0;
    std::optional<nlohmann::json> manifest_;
};

std::unique_ptr<DirectoryObservationSource> load_profiles(const std::string& dir);

}  // namespace fluxrec

#endif  // FLUXREC_CLI_HPP

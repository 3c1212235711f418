#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldg/bayes.hpp"
#include "ldg/errors.hpp"

namespace ldg {

class InvalidInit : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// splitmix64 finalizer; used to derive independent sub-seeds from one root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stage) { return splitmix64(root ^ splitmix64(stage)); }

/// mt19937_64 with hand-written uniform and normal transforms. The standard
/// distribution classes are implementation-defined, so they are avoided to
/// keep chains identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal by Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct ProposalConfig {
    enum class Kind { Univariate, Bivariate };

    Kind kind = Kind::Univariate;
    double sigma_alpha = 0.001;
    double sigma_beta = 0.0;
    double rho = 0.0;

    static ProposalConfig univariate(double sigma) { return {Kind::Univariate, sigma, 0.0, 0.0}; }
    static ProposalConfig bivariate(double sigma_alpha, double sigma_beta, double rho) {
        return {Kind::Bivariate, sigma_alpha, sigma_beta, rho};
    }

    [[nodiscard]] int dimension() const noexcept { return kind == Kind::Univariate ? 1 : 2; }

    void validate() const {
        require(sigma_alpha > 0.0, "proposal: sigma must be positive");
        if (kind == Kind::Bivariate) {
            require(sigma_beta > 0.0, "proposal: sigma_beta must be positive");
            require(std::abs(rho) < 1.0, "proposal: |rho| must be below 1");
        }
    }

    /// Symmetric Gaussian increment; the bivariate case uses the Cholesky factor of the covariance.
    [[nodiscard]] ParamVector draw(Rng& rng) const {
        if (kind == Kind::Univariate) return {sigma_alpha * rng.normal()};
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        return {sigma_alpha * z1, sigma_beta * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2)};
    }
};

struct Chain {
    std::vector<ParamVector> samples;  ///< xi_1 .. xi_N; the initial point is kept in `init`
    std::vector<bool> accepted;
    std::vector<double> log_target;    ///< log target at each sample
    std::uint64_t rng_seed = 0;
    ProposalConfig proposal;
    ParamVector init;
    std::string target;                ///< free-form description for the sidecar

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] int dimension() const noexcept { return proposal.dimension(); }

    [[nodiscard]] std::vector<double> coordinate(int c) const {
        std::vector<double> out;
        out.reserve(samples.size());
        for (const auto& s : samples) out.push_back(s[static_cast<std::size_t>(c)]);
        return out;
    }
};

struct NoAcceptHook {
    void operator()() const noexcept {}
};

/// Random-walk Metropolis-Hastings. `on_accept` runs after each accepted
/// move, right after the target was evaluated at the new point.
template <class LogTarget, class OnAccept = NoAcceptHook>
Chain run_chain(LogTarget&& log_target, const ParamVector& init, int length, const ProposalConfig& proposal,
                std::uint64_t rng_seed, OnAccept&& on_accept = {}) {
    require(length >= 1, "run_chain: length must be at least 1");
    proposal.validate();
    require(static_cast<int>(init.size()) == proposal.dimension(), "run_chain: init and proposal dimensions differ");

    double current_lt = log_target(init);
    if (!(current_lt > kNegInf)) throw InvalidInit("run_chain: log target at the initial point is -inf");
    on_accept();

    Chain chain;
    chain.rng_seed = rng_seed;
    chain.proposal = proposal;
    chain.init = init;
    chain.samples.reserve(static_cast<std::size_t>(length));
    chain.accepted.reserve(static_cast<std::size_t>(length));
    chain.log_target.reserve(static_cast<std::size_t>(length));

    Rng rng(rng_seed);
    ParamVector current = init;
    ParamVector candidate(init.size());
    for (int step = 0; step < length; ++step) {
        const auto noise = proposal.draw(rng);
        for (std::size_t i = 0; i < current.size(); ++i) candidate[i] = current[i] + noise[i];
        const double zeta = rng.uniform();

        bool accept = false;
        const double lt = log_target(candidate);
        if (lt > kNegInf) {
            const double log_r = lt - current_lt;
            accept = log_r >= 0.0 || zeta < std::exp(log_r);
        }
        if (accept) {
            current = candidate;
            current_lt = lt;
            on_accept();
        }
        chain.samples.push_back(current);
        chain.accepted.push_back(accept);
        chain.log_target.push_back(current_lt);
    }
    return chain;
}

inline double acceptance_rate(const Chain& chain) {
    require(!chain.accepted.empty(), "acceptance_rate: empty chain");
    std::size_t n = 0;
    for (bool a : chain.accepted) n += a ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(chain.accepted.size());
}

// -- persistence --------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_chain_csv(const Chain& chain, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot open " + path + " for writing");
    out << (chain.dimension() == 2 ? "step,alpha,beta,accepted\n" : "step,alpha,accepted\n");
    for (std::size_t k = 0; k < chain.size(); ++k) {
        out << (k + 1);
        for (double v : chain.samples[k]) out << ',' << format_double(v);
        out << ',' << (chain.accepted[k] ? 1 : 0) << '\n';
    }
}

inline nlohmann::json to_json(const ProposalConfig& p) {
    nlohmann::json j;
    if (p.kind == ProposalConfig::Kind::Univariate) {
        j["kind"] = "univariate";
        j["sigma"] = p.sigma_alpha;
    } else {
        j["kind"] = "bivariate";
        j["sigma_alpha"] = p.sigma_alpha;
        j["sigma_beta"] = p.sigma_beta;
        j["rho"] = p.rho;
    }
    return j;
}

inline nlohmann::json chain_sidecar(const Chain& chain) {
    return {{"seed", chain.rng_seed},
            {"proposal", to_json(chain.proposal)},
            {"init", chain.init},
            {"length", chain.size()},
            {"target", chain.target}};
}

inline void write_chain(const Chain& chain, const std::string& csv_path, const std::string& json_path) {
    write_chain_csv(chain, csv_path);
    std::ofstream out(json_path);
    require(out.good(), "cannot open " + json_path + " for writing");
    out << chain_sidecar(chain).dump(2) << '\n';
}

/// Reads samples and flags back; sidecar fields are left default.
inline Chain read_chain_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    std::string line;
    std::getline(in, line);
    const auto header = detail::split_csv_line(line);
    require(header.size() == 3 || header.size() == 4, "chain CSV: unexpected header");
    const std::size_t dim = header.size() - 2;
    Chain c;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        require(f.size() == header.size(), "chain CSV: malformed row: " + line);
        ParamVector s;
        for (std::size_t i = 0; i < dim; ++i) s.push_back(std::stod(f[1 + i]));
        c.samples.push_back(std::move(s));
        c.accepted.push_back(f.back() == "1");
    }
    c.proposal.kind = dim == 2 ? ProposalConfig::Kind::Bivariate : ProposalConfig::Kind::Univariate;
    return c;
}

}  // namespace ldg

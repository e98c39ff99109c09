#include "minshare/belief.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "minshare/errors.hpp"

namespace minshare {

BeliefVector BeliefVector::uniform(int n_hypotheses) {
    if (n_hypotheses < 2)
        throw std::invalid_argument("BeliefVector::uniform: need at least 2 hypotheses");
    std::vector<double> v(static_cast<std::size_t>(n_hypotheses),
                          -std::log(static_cast<double>(n_hypotheses)));
    return from_log_unnormalized(std::move(v));
}

BeliefVector BeliefVector::from_log_unnormalized(std::vector<double> log_values) {
    if (log_values.empty())
        throw std::invalid_argument("BeliefVector: empty vector");
    for (double v : log_values)
        if (!std::isfinite(v)) throw std::invalid_argument("BeliefVector: non-finite log value");
    const double shift = *std::max_element(log_values.begin(), log_values.end());
    double sum = 0.0;
    for (double v : log_values) sum += std::exp(v - shift);
    const double lse = shift + std::log(sum);
    for (double& v : log_values) v -= lse;
    return BeliefVector(std::move(log_values));
}

BeliefVector BeliefVector::from_probabilities(std::span<const double> p) {
    std::vector<double> logs(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0) || !std::isfinite(p[i]))
            throw std::invalid_argument("BeliefVector: probabilities must be strictly positive");
        logs[i] = std::log(p[i]);
    }
    return from_log_unnormalized(std::move(logs));
}

BeliefVector BeliefVector::from_normalized_log(std::vector<double> log_values) {
    if (log_values.empty())
        throw std::invalid_argument("BeliefVector: empty vector");
    return BeliefVector(std::move(log_values));
}

std::vector<double> BeliefVector::probabilities() const {
    std::vector<double> p(log_p_.size());
    for (std::size_t i = 0; i < log_p_.size(); ++i) p[i] = std::exp(log_p_[i]);
    return p;
}

BeliefVector uniform_belief(int n_hypotheses) { return BeliefVector::uniform(n_hypotheses); }

BeliefVector local_update(const BeliefVector& alpha_prev, std::span<const double> likelihood_row) {
    const int m = alpha_prev.size();
    if (static_cast<int>(likelihood_row.size()) != m)
        throw std::invalid_argument("local_update: likelihood row length mismatch");
    std::vector<double> logs(static_cast<std::size_t>(m));
    for (int h = 0; h < m; ++h) {
        const double f = likelihood_row[static_cast<std::size_t>(h)];
        if (!(f > 0.0) || !std::isfinite(f))
            throw std::domain_error("local_update: likelihood values must be strictly positive");
        logs[static_cast<std::size_t>(h)] = alpha_prev.log_at(h) + std::log(f);
    }
    return BeliefVector::from_log_unnormalized(std::move(logs));
}

std::vector<double> componentwise_min_log(const BeliefVector& own_prev,
                                          std::span<const BeliefVector> neighbors,
                                          const BeliefVector& alpha_now) {
    const int m = own_prev.size();
    if (alpha_now.size() != m)
        throw std::invalid_argument("min rule: local belief length mismatch");
    for (const auto& nb : neighbors)
        if (nb.size() != m) throw std::invalid_argument("min rule: neighbor belief length mismatch");
    std::vector<double> mins(static_cast<std::size_t>(m));
    for (int h = 0; h < m; ++h) {
        double v = std::min(own_prev.log_at(h), alpha_now.log_at(h));
        for (const auto& nb : neighbors) v = std::min(v, nb.log_at(h));
        mins[static_cast<std::size_t>(h)] = v;
    }
    return mins;
}

BeliefVector min_rule_full(const BeliefVector& own_prev,
                           std::span<const BeliefVector> neighbor_prevs,
                           const BeliefVector& alpha_now) {
    return BeliefVector::from_log_unnormalized(
        componentwise_min_log(own_prev, neighbor_prevs, alpha_now));
}

BeliefVector min_rule_partial(const BeliefVector& own_prev,
                              std::span<const BeliefVector> estimates_now,
                              const BeliefVector& alpha_now) {
    return BeliefVector::from_log_unnormalized(
        componentwise_min_log(own_prev, estimates_now, alpha_now));
}

namespace {

// Shared core of both estimate refreshes: substitute the received value at
// the shared hypothesis, keep every other entry, divide by the new total
// mass 1 - base(tau) + received(tau). The mass is accumulated in the linear
// domain as the literal sum of the retained entries plus the received value
// (received first, then ascending hypothesis order), so it is exactly the
// unnormalized total even when base(tau) sits within an ulp of one and the
// subtraction form would cancel away the residual mass. Entries that
// underflow to zero perturb the sum by less than 1e-300 and are tolerated.
BeliefVector scaled_replace(const BeliefVector& base, const SharedMessage& msg) {
    const int m = base.size();
    if (msg.hypothesis < 0 || msg.hypothesis >= m)
        throw std::invalid_argument("estimate update: shared hypothesis out of range");
    if (!(msg.log_belief <= 0.0))
        throw std::invalid_argument("estimate update: received log belief must be <= 0");

    // Received value identical to the stored one: the mass is exactly one
    // and the vector is unchanged.
    if (msg.log_belief == base.log_at(msg.hypothesis)) return base;

    double mass = std::exp(msg.log_belief);
    for (int h = 0; h < m; ++h)
        if (h != msg.hypothesis) mass += std::exp(base.log_at(h));
    if (!(mass > 0.0))
        throw EngineError("estimate update: degenerate total mass (stored belief 1, received 0)");
    const double log_mass = std::log(mass);

    std::vector<double> logs(static_cast<std::size_t>(m));
    for (int h = 0; h < m; ++h) {
        const double v = (h == msg.hypothesis ? msg.log_belief : base.log_at(h)) - log_mass;
        // The exp/log round trip can land a dominant entry an ulp above zero.
        logs[static_cast<std::size_t>(h)] = std::min(v, 0.0);
    }
    return BeliefVector::from_normalized_log(std::move(logs));
}

}  // namespace

BeliefVector estimate_update_previous(const BeliefVector& estimate_prev,
                                      const SharedMessage& msg) {
    return scaled_replace(estimate_prev, msg);
}

BeliefVector estimate_update_own(const BeliefVector& own_prev, const SharedMessage& msg) {
    return scaled_replace(own_prev, msg);
}

}  // namespace minshare

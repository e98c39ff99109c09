#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace minshare {

// Probability vector over hypotheses held in the log domain (nats). After
// normalization the exponentials sum to one and every entry is <= 0 and
// finite. Log storage keeps the e^{-Kt} decay of rejected hypotheses
// representable far beyond double underflow (~t = 700/K rounds).
class BeliefVector {
public:
    BeliefVector() = default;

    static BeliefVector uniform(int n_hypotheses);

    // Shift by the log-sum-of-exponentials (max-shifted, left-to-right
    // summation so runs are bit-reproducible).
    static BeliefVector from_log_unnormalized(std::vector<double> log_values);

    // Values need not sum to one; they are normalized. All must be positive.
    static BeliefVector from_probabilities(std::span<const double> p);

    // Caller guarantees the values are already normalized logs (used by the
    // update rules and when rebuilding vectors from exported logs).
    static BeliefVector from_normalized_log(std::vector<double> log_values);

    int size() const { return static_cast<int>(log_p_.size()); }
    double log_at(int h) const { return log_p_[static_cast<std::size_t>(h)]; }
    double prob_at(int h) const { return std::exp(log_p_[static_cast<std::size_t>(h)]); }
    std::span<const double> log_values() const { return log_p_; }
    std::vector<double> probabilities() const;

private:
    explicit BeliefVector(std::vector<double> log_values) : log_p_(std::move(log_values)) {}
    std::vector<double> log_p_;
};

// One partial-sharing transmission: the sender's previous-round public
// belief on a single hypothesis.
struct SharedMessage {
    int hypothesis = 0;
    double log_belief = 0.0;
};

// Equal belief on every hypothesis; requires at least two hypotheses.
BeliefVector uniform_belief(int n_hypotheses);

// Bayes update of the local belief against one observation's likelihood row.
BeliefVector local_update(const BeliefVector& alpha_prev,
                          std::span<const double> likelihood_row);

// Componentwise minimum of the logs across own previous belief, all
// neighbor vectors, and the fresh local belief. Exact: min commutes with
// log. Exposed separately so the exactness is testable pre-normalization.
std::vector<double> componentwise_min_log(const BeliefVector& own_prev,
                                          std::span<const BeliefVector> neighbors,
                                          const BeliefVector& alpha_now);

// Min-rule public update with full neighbor vectors.
BeliefVector min_rule_full(const BeliefVector& own_prev,
                           std::span<const BeliefVector> neighbor_prevs,
                           const BeliefVector& alpha_now);

// Min-rule public update with per-neighbor estimate vectors; same contract.
BeliefVector min_rule_partial(const BeliefVector& own_prev,
                              std::span<const BeliefVector> estimates_now,
                              const BeliefVector& alpha_now);

// Neighbor-estimate refresh keyed on stored previous estimates: the shared
// entry is replaced by the received value, every other entry is kept, and
// the whole vector is rescaled by the resulting total mass.
BeliefVector estimate_update_previous(const BeliefVector& estimate_prev,
                                      const SharedMessage& msg);

// Memory-efficient variant: unshared entries are filled from the receiver's
// own previous public belief, so nothing is stored per neighbor.
BeliefVector estimate_update_own(const BeliefVector& own_prev, const SharedMessage& msg);

}  // namespace minshare

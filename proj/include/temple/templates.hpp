#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace temple {

/// A transition template: the probability vector of some state-action pair
/// sorted into non-increasing order, plus its expected reward. Trailing
/// zeros are trimmed, so `probs.size()` is the support size; comparisons
/// zero-pad the shorter vector. This is the unit of similarity pooled
/// across pairs and tasks.
struct TransitionTemplate {
    std::vector<double> probs;  // non-increasing, sums to 1, no trailing zeros
    double reward = 0.0;
};

/// Stable bijection between descending rank and original next-state index.
/// rank_to_index[r] is the index holding the r-th largest value; among equal
/// values the smaller index receives the smaller rank.
struct RankingPermutation {
    std::vector<int> rank_to_index;
    std::vector<int> index_to_rank;

    int size() const { return static_cast<int>(rank_to_index.size()); }
    bool operator==(const RankingPermutation&) const = default;

    /// State order -> rank order (out[r] = in[rank_to_index[r]]).
    std::vector<std::uint64_t> to_rank_order(std::span<const std::uint64_t> state_order) const;
    /// Rank order -> state order. Input shorter than size() is zero-padded;
    /// longer input is an error.
    std::vector<std::uint64_t> to_state_order(std::span<const std::uint64_t> rank_order) const;
};

/// Pooled visits of one template: rank-ordered counts plus accumulated
/// reward. Counts are kept non-increasing (re-sorted after every update) so
/// the renormalized template stays valid.
struct TtVisitRecord {
    std::vector<std::uint64_t> ordered_counts;
    double reward_sum = 0.0;

    std::uint64_t total() const;
};

struct GenTtResult {
    TransitionTemplate tmpl;
    TtVisitRecord record;
    RankingPermutation sigma;
};

/// Builds a template from raw per-next-state counts: finds the stable
/// descending permutation, records the ordered counts, and normalizes.
/// Throws std::invalid_argument on an all-zero count vector.
GenTtResult gen_tt(std::span<const std::uint64_t> counts, double reward_sum);

/// Distance between two templates: l2 on the probability parts (shorter one
/// zero-padded) plus the absolute reward difference. A metric; bounded by
/// sqrt((n-1)/n) + 1 < 2 for rewards in [0,1].
double tt_distance(const TransitionTemplate& a, const TransitionTemplate& b);

struct AugmentResult {
    std::vector<std::uint64_t> counts;  // state order
    double reward_sum = 0.0;
};

/// The template pool: parallel lists of templates and their visit records.
/// Single-writer; persists across tasks.
class TemplateLibrary {
public:
    int size() const { return static_cast<int>(templates_.size()); }
    const TransitionTemplate& template_at(int i) const { return templates_.at(i); }
    const TtVisitRecord& record_at(int i) const { return records_.at(i); }

    /// Inserts a new template with its initial record; returns its index.
    int insert(TransitionTemplate tmpl, TtVisitRecord record);

    /// Adds state-ordered counts to a record (sorted descending internally,
    /// as in template generation). Zero counts are a no-op.
    void update(int index, std::span<const std::uint64_t> counts, double reward_sum);

    /// Adds counts that are already in rank order (used when a pair
    /// contributes under its frozen ranking permutation).
    void update_ordered(int index, std::span<const std::uint64_t> ordered_counts,
                        double reward_sum);

    /// Index of the template closest to `candidate` if that distance is
    /// strictly below `gap`, otherwise nullopt. Equidistant templates tie
    /// toward the lower index. Templates whose support exceeds
    /// `max_support` (when >= 0) are skipped: they cannot describe a pair
    /// living in a smaller state space.
    std::optional<int> find_closest(const TransitionTemplate& candidate, double gap,
                                    int max_support = -1) const;

    /// Pooled counts of template `index` permuted back into state order via
    /// sigma, plus the pooled reward. Throws std::length_error if the
    /// record's support exceeds sigma's span.
    AugmentResult augment(int index, const RankingPermutation& sigma) const;

    /// Sum of record totals; conserved against contributed pair counts.
    std::uint64_t total_pooled() const;

    /// Line-oriented text persistence: one template per line holding
    /// support length, probabilities, reward, pooled counts and reward sum.
    void save(std::ostream& out) const;
    static TemplateLibrary load(std::istream& in);

private:
    void renormalize(int index);

    std::vector<TransitionTemplate> templates_;
    std::vector<TtVisitRecord> records_;
};

}  // namespace temple

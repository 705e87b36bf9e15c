#include "temple/templates.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace temple {

namespace {

void trim_trailing_zeros(std::vector<std::uint64_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

void trim_trailing_zeros(std::vector<double>& v) {
    while (!v.empty() && v.back() == 0.0) v.pop_back();
}

}  // namespace

std::vector<std::uint64_t> RankingPermutation::to_rank_order(
    std::span<const std::uint64_t> state_order) const {
    if (state_order.size() != rank_to_index.size())
        throw std::length_error("RankingPermutation: size mismatch");
    std::vector<std::uint64_t> out(state_order.size());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = state_order[rank_to_index[r]];
    return out;
}

std::vector<std::uint64_t> RankingPermutation::to_state_order(
    std::span<const std::uint64_t> rank_order) const {
    if (rank_order.size() > rank_to_index.size())
        throw std::length_error("RankingPermutation: rank vector longer than permutation");
    std::vector<std::uint64_t> out(rank_to_index.size(), 0);
    for (std::size_t r = 0; r < rank_order.size(); ++r) out[rank_to_index[r]] = rank_order[r];
    return out;
}

std::uint64_t TtVisitRecord::total() const {
    return std::accumulate(ordered_counts.begin(), ordered_counts.end(), std::uint64_t{0});
}

GenTtResult gen_tt(std::span<const std::uint64_t> counts, double reward_sum) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0)
        throw std::invalid_argument("gen_tt: all-zero counts define no template");

    RankingPermutation sigma;
    sigma.rank_to_index.resize(counts.size());
    std::iota(sigma.rank_to_index.begin(), sigma.rank_to_index.end(), 0);
    std::stable_sort(sigma.rank_to_index.begin(), sigma.rank_to_index.end(),
                     [&](int i, int j) { return counts[i] > counts[j]; });
    sigma.index_to_rank.resize(counts.size());
    for (std::size_t r = 0; r < sigma.rank_to_index.size(); ++r)
        sigma.index_to_rank[sigma.rank_to_index[r]] = static_cast<int>(r);

    GenTtResult out;
    out.sigma = std::move(sigma);
    out.record.ordered_counts = out.sigma.to_rank_order(counts);
    out.record.reward_sum = reward_sum;
    out.tmpl.probs.resize(counts.size());
    for (std::size_t r = 0; r < counts.size(); ++r)
        out.tmpl.probs[r] =
            static_cast<double>(out.record.ordered_counts[r]) / static_cast<double>(total);
    trim_trailing_zeros(out.tmpl.probs);
    out.tmpl.reward = reward_sum / static_cast<double>(total);
    return out;
}

double tt_distance(const TransitionTemplate& a, const TransitionTemplate& b) {
    const std::size_t n = std::max(a.probs.size(), b.probs.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pa = i < a.probs.size() ? a.probs[i] : 0.0;
        const double pb = i < b.probs.size() ? b.probs[i] : 0.0;
        sq += (pa - pb) * (pa - pb);
    }
    return std::sqrt(sq) + std::abs(a.reward - b.reward);
}

int TemplateLibrary::insert(TransitionTemplate tmpl, TtVisitRecord record) {
    trim_trailing_zeros(tmpl.probs);
    trim_trailing_zeros(record.ordered_counts);
    templates_.push_back(std::move(tmpl));
    records_.push_back(std::move(record));
    return size() - 1;
}

void TemplateLibrary::update(int index, std::span<const std::uint64_t> counts,
                             double reward_sum) {
    std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    update_ordered(index, sorted, reward_sum);
}

void TemplateLibrary::update_ordered(int index,
                                     std::span<const std::uint64_t> ordered_counts,
                                     double reward_sum) {
    TtVisitRecord& rec = records_.at(index);
    if (ordered_counts.size() > rec.ordered_counts.size())
        rec.ordered_counts.resize(ordered_counts.size(), 0);
    for (std::size_t i = 0; i < ordered_counts.size(); ++i)
        rec.ordered_counts[i] += ordered_counts[i];
    // Heterogeneous contributions can transiently break the descending
    // order; re-sort so the record stays a valid template source.
    std::sort(rec.ordered_counts.begin(), rec.ordered_counts.end(), std::greater<>());
    trim_trailing_zeros(rec.ordered_counts);
    rec.reward_sum += reward_sum;
    renormalize(index);
}

void TemplateLibrary::renormalize(int index) {
    const TtVisitRecord& rec = records_.at(index);
    const std::uint64_t total = rec.total();
    if (total == 0) return;
    TransitionTemplate& tmpl = templates_.at(index);
    tmpl.probs.resize(rec.ordered_counts.size());
    for (std::size_t i = 0; i < rec.ordered_counts.size(); ++i)
        tmpl.probs[i] =
            static_cast<double>(rec.ordered_counts[i]) / static_cast<double>(total);
    tmpl.reward = rec.reward_sum / static_cast<double>(total);
}

std::optional<int> TemplateLibrary::find_closest(const TransitionTemplate& candidate,
                                                 double gap, int max_support) const {
    std::optional<int> best;
    double best_dist = 0.0;
    for (int i = 0; i < size(); ++i) {
        if (max_support >= 0 &&
            templates_[i].probs.size() > static_cast<std::size_t>(max_support))
            continue;
        const double d = tt_distance(candidate, templates_[i]);
        if (!best || d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    if (best && best_dist < gap) return best;
    return std::nullopt;
}

AugmentResult TemplateLibrary::augment(int index, const RankingPermutation& sigma) const {
    const TtVisitRecord& rec = records_.at(index);
    if (rec.ordered_counts.size() > static_cast<std::size_t>(sigma.size()))
        throw std::length_error(
            "TemplateLibrary::augment: record support exceeds the pair's state space");
    AugmentResult out;
    out.counts = sigma.to_state_order(rec.ordered_counts);
    out.reward_sum = rec.reward_sum;
    return out;
}

std::uint64_t TemplateLibrary::total_pooled() const {
    std::uint64_t sum = 0;
    for (const TtVisitRecord& rec : records_) sum += rec.total();
    return sum;
}

void TemplateLibrary::save(std::ostream& out) const {
    out.precision(17);
    for (int i = 0; i < size(); ++i) {
        const TransitionTemplate& t = templates_[i];
        const TtVisitRecord& r = records_[i];
        out << t.probs.size();
        for (double p : t.probs) out << ' ' << p;
        out << ' ' << t.reward;
        for (std::uint64_t c : r.ordered_counts) out << ' ' << c;
        out << ' ' << r.reward_sum << '\n';
    }
}

TemplateLibrary TemplateLibrary::load(std::istream& in) {
    TemplateLibrary lib;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t k = 0;
        if (!(ls >> k)) throw std::runtime_error("TemplateLibrary::load: bad line");
        TransitionTemplate t;
        t.probs.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            if (!(ls >> t.probs[i]))
                throw std::runtime_error("TemplateLibrary::load: truncated probs");
        if (!(ls >> t.reward))
            throw std::runtime_error("TemplateLibrary::load: missing reward");
        TtVisitRecord r;
        r.ordered_counts.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            if (!(ls >> r.ordered_counts[i]))
                throw std::runtime_error("TemplateLibrary::load: truncated counts");
        if (!(ls >> r.reward_sum))
            throw std::runtime_error("TemplateLibrary::load: missing reward sum");
        lib.insert(std::move(t), std::move(r));
    }
    return lib;
}

}  // namespace temple

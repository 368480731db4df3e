#include "chargelat/intervals.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "chargelat/charge.hpp"

namespace chargelat {

namespace {

// Enumerates split chains of [lo,hi) recursively, first block ascending, so
// emission order is lexicographic on the chain of split points.
bool chain_partitions_rec(std::uint64_t lo, std::uint64_t hi, std::optional<std::size_t> max_blocks,
                          MemberId target, const std::function<MemberId(std::uint64_t, std::uint64_t)>& block,
                          std::vector<MemberId>& chosen, bool& pruned,
                          const std::function<bool(const Partition&)>& visit) {
  if (lo == hi) return visit(Partition{target, chosen});
  if (max_blocks && chosen.size() >= *max_blocks) {
    pruned = true;
    return true;
  }
  for (std::uint64_t t = lo + 1; t <= hi; ++t) {
    chosen.push_back(block(lo, t));
    const bool keep_going = chain_partitions_rec(t, hi, max_blocks, target, block, chosen, pruned, visit);
    chosen.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

EnumerationStatus chain_partitions(std::uint64_t lo, std::uint64_t hi, const PartitionOptions& opts,
                                   MemberId target,
                                   const std::function<MemberId(std::uint64_t, std::uint64_t)>& block,
                                   const std::function<bool(const Partition&)>& visit) {
  if (lo >= hi) {
    visit(Partition{target, {}});
    return EnumerationStatus{true};
  }
  const std::uint64_t width = hi - lo;
  if (width > 25 && !opts.max_blocks) {
    throw std::invalid_argument("interval partition enumeration needs max_blocks for width > 25");
  }
  std::vector<MemberId> chosen;
  bool pruned = false;
  bool finished = chain_partitions_rec(lo, hi, opts.max_blocks, target, block, chosen, pruned, visit);
  return EnumerationStatus{finished && !pruned};
}

}  // namespace

NatIntervalBackend::NatIntervalBackend(std::uint64_t min_element) : min_element_(min_element) {
  table_.emplace_back(min_element_, min_element_);  // canonical empty member
  index_[table_.front()] = 0;
}

std::string NatIntervalBackend::describe() const {
  std::ostringstream os;
  os << "nat-intervals min=" << min_element_;
  return os.str();
}

MemberId NatIntervalBackend::interval(std::uint64_t lo, std::uint64_t hi) const {
  if (lo >= hi) {
    lo = min_element_;
    hi = min_element_;
  } else if (lo < min_element_) {
    throw std::invalid_argument("interval below the backend's minimum element");
  }
  std::lock_guard lock(mutex_);
  auto [it, inserted] = index_.try_emplace({lo, hi}, static_cast<std::uint32_t>(table_.size()));
  if (inserted) table_.emplace_back(lo, hi);
  return MemberId{it->second};
}

std::pair<std::uint64_t, std::uint64_t> NatIntervalBackend::bounds(MemberId a) const {
  std::lock_guard lock(mutex_);
  return table_.at(a.index);
}

bool NatIntervalBackend::is_empty(MemberId a) const {
  auto [lo, hi] = bounds(a);
  return lo >= hi;
}

MemberId NatIntervalBackend::intersect(MemberId a, MemberId b) const {
  auto [alo, ahi] = bounds(a);
  auto [blo, bhi] = bounds(b);
  return interval(std::max(alo, blo), std::min(ahi, bhi));
}

std::vector<MemberId> NatIntervalBackend::difference_decomposition(MemberId a, MemberId b) const {
  auto [alo, ahi] = bounds(a);
  auto [blo, bhi] = bounds(b);
  std::vector<MemberId> out;
  if (alo >= ahi) return out;
  if (blo >= bhi || bhi <= alo || ahi <= blo) {  // no overlap
    out.push_back(a);
    return out;
  }
  if (alo < blo) out.push_back(interval(alo, std::min(ahi, blo)));
  if (bhi < ahi) out.push_back(interval(std::max(alo, bhi), ahi));
  return out;
}

bool NatIntervalBackend::is_subset(MemberId a, MemberId b) const {
  auto [alo, ahi] = bounds(a);
  if (alo >= ahi) return true;
  auto [blo, bhi] = bounds(b);
  return blo <= alo && ahi <= bhi;
}

std::uint64_t NatIntervalBackend::block_order_key(MemberId a) const {
  auto [lo, hi] = bounds(a);
  return lo >= hi ? UINT64_MAX : lo;
}

bool NatIntervalBackend::union_equals(std::span<const MemberId> blocks, MemberId target) const {
  auto [tlo, thi] = bounds(target);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;
  for (MemberId b : blocks) {
    auto [lo, hi] = bounds(b);
    if (lo < hi) runs.emplace_back(lo, hi);
  }
  if (runs.empty()) return tlo >= thi;
  if (tlo >= thi) return false;
  std::sort(runs.begin(), runs.end());
  if (runs.front().first != tlo || runs.back().second != thi) return false;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    if (runs[i].second != runs[i + 1].first) return false;
  }
  return true;
}

std::string NatIntervalBackend::member_name(MemberId a) const {
  auto [lo, hi] = bounds(a);
  if (lo >= hi) return "{}";
  std::ostringstream os;
  os << '[' << lo << ',' << hi << ')';
  return os.str();
}

EnumerationStatus NatIntervalBackend::for_each_member(std::optional<std::size_t> bound,
                                                      const std::function<bool(MemberId)>& visit) const {
  std::size_t emitted = 0;
  auto emit = [&](MemberId m) {
    if (bound && emitted >= *bound) return false;
    ++emitted;
    return visit(m);
  };
  if (!emit(empty_member())) return EnumerationStatus{false};
  for (std::uint64_t hi = min_element_ + 1;; ++hi) {
    for (std::uint64_t lo = min_element_; lo < hi; ++lo) {
      if (!emit(interval(lo, hi))) return EnumerationStatus{false};
    }
  }
}

EnumerationStatus NatIntervalBackend::for_each_partition(MemberId a, const PartitionOptions& opts,
                                                         const std::function<bool(const Partition&)>& visit) const {
  auto [lo, hi] = bounds(a);
  return chain_partitions(lo, hi, opts, a,
                          [this](std::uint64_t s, std::uint64_t t) { return interval(s, t); }, visit);
}

RingMember NatIntervalBackend::ring_membership(std::vector<std::uint64_t> elements) const {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty() && elements.front() < min_element_) {
    throw std::invalid_argument("element below the backend's minimum");
  }
  RingMember out;
  std::size_t i = 0;
  while (i < elements.size()) {  // maximal runs
    std::size_t j = i;
    while (j + 1 < elements.size() && elements[j + 1] == elements[j] + 1) ++j;
    out.blocks.push_back(interval(elements[i], elements[j] + 1));
    i = j + 1;
  }
  return out;
}

GridIntervalBackend::GridIntervalBackend(EndpointGrid grid) : grid_(std::move(grid)) {
  if (grid_.points.size() < 2) throw std::invalid_argument("endpoint grid needs at least two points");
  for (std::size_t i = 0; i + 1 < grid_.points.size(); ++i) {
    if (!(grid_.points[i] < grid_.points[i + 1])) {
      throw std::invalid_argument("endpoint grid must be strictly increasing");
    }
  }
  const std::size_t n = grid_.points.size();
  span_index_.assign(n, std::vector<std::uint32_t>(n + 1, 0));
  table_.emplace_back(0, 0);  // empty member
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      span_index_[i][j] = static_cast<std::uint32_t>(table_.size());
      table_.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  }
}

std::string GridIntervalBackend::describe() const {
  std::ostringstream os;
  os << "grid-intervals points=" << grid_.points.size() << " range=[" << to_string(grid_.points.front())
     << ',' << to_string(grid_.points.back()) << ')';
  return os.str();
}

MemberId GridIntervalBackend::cell_span(std::size_t i, std::size_t j) const {
  if (i >= j) return MemberId{0};
  if (j >= grid_.points.size()) throw std::invalid_argument("grid span out of range");
  return MemberId{span_index_[i][j]};
}

std::pair<std::size_t, std::size_t> GridIntervalBackend::span_of(MemberId a) const {
  auto [i, j] = table_.at(a.index);
  return {i, j};
}

MemberId GridIntervalBackend::member_from_endpoints(const Rational& lo, const Rational& hi) const {
  if (!(lo < hi)) return MemberId{0};
  auto locate = [&](const Rational& p) -> std::size_t {
    auto it = std::lower_bound(grid_.points.begin(), grid_.points.end(), p);
    if (it == grid_.points.end() || *it != p) {
      throw std::invalid_argument("endpoint " + to_string(p) + " is not on the grid");
    }
    return static_cast<std::size_t>(it - grid_.points.begin());
  };
  return cell_span(locate(lo), locate(hi));
}

bool GridIntervalBackend::is_empty(MemberId a) const {
  auto [i, j] = span_of(a);
  return i >= j;
}

MemberId GridIntervalBackend::intersect(MemberId a, MemberId b) const {
  auto [ai, aj] = span_of(a);
  auto [bi, bj] = span_of(b);
  std::size_t lo = std::max(ai, bi), hi = std::min(aj, bj);
  return lo >= hi ? MemberId{0} : cell_span(lo, hi);
}

std::vector<MemberId> GridIntervalBackend::difference_decomposition(MemberId a, MemberId b) const {
  auto [ai, aj] = span_of(a);
  auto [bi, bj] = span_of(b);
  std::vector<MemberId> out;
  if (ai >= aj) return out;
  if (bi >= bj || bj <= ai || aj <= bi) {
    out.push_back(a);
    return out;
  }
  if (ai < bi) out.push_back(cell_span(ai, std::min(aj, bi)));
  if (bj < aj) out.push_back(cell_span(std::max(ai, bj), aj));
  return out;
}

bool GridIntervalBackend::is_subset(MemberId a, MemberId b) const {
  auto [ai, aj] = span_of(a);
  if (ai >= aj) return true;
  auto [bi, bj] = span_of(b);
  return bi <= ai && aj <= bj;
}

std::uint64_t GridIntervalBackend::block_order_key(MemberId a) const {
  auto [i, j] = span_of(a);
  return i >= j ? UINT64_MAX : i;
}

bool GridIntervalBackend::union_equals(std::span<const MemberId> blocks, MemberId target) const {
  auto [ti, tj] = span_of(target);
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (MemberId b : blocks) {
    auto [i, j] = span_of(b);
    if (i < j) runs.emplace_back(i, j);
  }
  if (runs.empty()) return ti >= tj;
  if (ti >= tj) return false;
  std::sort(runs.begin(), runs.end());
  if (runs.front().first != ti || runs.back().second != tj) return false;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    if (runs[i].second != runs[i + 1].first) return false;
  }
  return true;
}

std::string GridIntervalBackend::member_name(MemberId a) const {
  auto [i, j] = span_of(a);
  if (i >= j) return "{}";
  std::ostringstream os;
  os << '[' << to_string(grid_.points[i]) << ',' << to_string(grid_.points[j]) << ')';
  return os.str();
}

EnumerationStatus GridIntervalBackend::for_each_member(std::optional<std::size_t> bound,
                                                       const std::function<bool(MemberId)>& visit) const {
  std::size_t limit = bound.value_or(table_.size());
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (i >= limit) return EnumerationStatus{false};
    if (!visit(MemberId{static_cast<std::uint32_t>(i)})) return EnumerationStatus{false};
  }
  return EnumerationStatus{true};
}

std::optional<std::size_t> GridIntervalBackend::member_count() const { return table_.size(); }

EnumerationStatus GridIntervalBackend::for_each_partition(MemberId a, const PartitionOptions& opts,
                                                          const std::function<bool(const Partition&)>& visit) const {
  auto [i, j] = span_of(a);
  return chain_partitions(i, j, opts, a,
                          [this](std::uint64_t s, std::uint64_t t) {
                            return cell_span(static_cast<std::size_t>(s), static_cast<std::size_t>(t));
                          },
                          visit);
}

RingMember GridIntervalBackend::ring_membership(const std::vector<bool>& cells) const {
  if (cells.size() != grid_.cell_count()) {
    throw std::invalid_argument("cell flag vector does not match the grid");
  }
  RingMember out;
  std::size_t i = 0;
  while (i < cells.size()) {
    if (!cells[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < cells.size() && cells[j + 1]) ++j;
    out.blocks.push_back(cell_span(i, j + 1));
    i = j + 1;
  }
  return out;
}

IntervalDpResult interval_chain_optimum(
    std::uint64_t lo, std::uint64_t hi, bool maximize,
    const std::function<ExtReal(std::uint64_t, std::uint64_t)>& block_value) {
  if (lo >= hi) return {ExtReal(0), {lo}};
  const std::size_t n = static_cast<std::size_t>(hi - lo);
  // best[i] = optimum over the suffix [lo+i, hi); forward reconstruction then
  // yields the lexicographically first optimal chain.
  std::vector<ExtReal> best(n + 1, ExtReal(0));
  for (std::size_t i = n; i-- > 0;) {
    std::optional<ExtReal> acc;
    for (std::size_t j = i + 1; j <= n; ++j) {
      ExtReal v = add(block_value(lo + i, lo + j), best[j]);
      if (!acc || (maximize ? (*acc < v) : (v < *acc))) acc = std::move(v);
    }
    best[i] = *std::move(acc);
  }
  std::vector<std::uint64_t> chain{lo};
  std::size_t pos = 0;
  while (pos < n) {
    for (std::size_t j = pos + 1; j <= n; ++j) {
      if (add(block_value(lo + pos, lo + j), best[j]) == best[pos]) {
        chain.push_back(lo + j);
        pos = j;
        break;
      }
    }
  }
  return {best[0], std::move(chain)};
}

ExtReal sup_interval_dp(const std::vector<Charge>& family, MemberId a) {
  if (family.empty()) throw EmptyFamily();
  const SemiRingBackend& backend = *family.front().backend();
  auto span = interval_span(family.front(), a);
  auto block_value = [&](std::uint64_t s, std::uint64_t t) {
    std::optional<ExtReal> best;
    for (const Charge& charge : family) {
      ExtReal v = interval_value(charge, s, t);
      if (!best || *best < v) best = std::move(v);
    }
    if (best->is_neg_inf()) {
      throw InadmissibleFamily(backend.member_name(a));
    }
    return *std::move(best);
  };
  return interval_chain_optimum(span.first, span.second, /*maximize=*/true, block_value).value;
}

}  // namespace chargelat

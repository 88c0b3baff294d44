#include "fred/suffix_array.hpp"

#include <algorithm>
#include <limits>

namespace fred {

namespace {

// s[i] in [0, upper]. Returns the suffix array of s.
template <typename I>
std::vector<I> sa_is(const std::vector<I>& s, I upper) {
  const I n = static_cast<I>(s.size());
  if (n == 0) return {};
  if (n == 1) return {0};
  if (n == 2) return s[0] < s[1] ? std::vector<I>{0, 1} : std::vector<I>{1, 0};

  std::vector<I> sa(static_cast<std::size_t>(n));
  // true = S-type
  std::vector<bool> ls(static_cast<std::size_t>(n), false);
  for (I i = n - 2; i >= 0; --i) {
    ls[i] = (s[i] == s[i + 1]) ? ls[i + 1] : (s[i] < s[i + 1]);
  }

  // sum_l[c]: first slot of bucket c; sum_s[c]: first S slot of bucket c.
  std::vector<I> sum_l(static_cast<std::size_t>(upper) + 1, 0);
  std::vector<I> sum_s(static_cast<std::size_t>(upper) + 1, 0);
  for (I i = 0; i < n; ++i) {
    if (!ls[i]) {
      ++sum_s[s[i]];
    } else {
      ++sum_l[s[i] + 1];
    }
  }
  for (I c = 0; c <= upper; ++c) {
    sum_s[c] += sum_l[c];
    if (c < upper) sum_l[c + 1] += sum_s[c];
  }

  std::vector<I> buf(static_cast<std::size_t>(upper) + 1);
  auto induce = [&](const std::vector<I>& lms) {
    std::fill(sa.begin(), sa.end(), I{-1});
    std::copy(sum_s.begin(), sum_s.end(), buf.begin());
    for (I d : lms) {
      if (d == n) continue;
      sa[buf[s[d]]++] = d;
    }
    std::copy(sum_l.begin(), sum_l.end(), buf.begin());
    sa[buf[s[n - 1]]++] = n - 1;
    for (I i = 0; i < n; ++i) {
      const I v = sa[i];
      if (v >= 1 && !ls[v - 1]) sa[buf[s[v - 1]]++] = v - 1;
    }
    std::copy(sum_l.begin(), sum_l.end(), buf.begin());
    for (I i = n - 1; i >= 0; --i) {
      const I v = sa[i];
      if (v >= 1 && ls[v - 1]) sa[--buf[s[v - 1] + 1]] = v - 1;
    }
  };

  std::vector<I> lms_map(static_cast<std::size_t>(n) + 1, I{-1});
  I m = 0;
  for (I i = 1; i < n; ++i) {
    if (!ls[i - 1] && ls[i]) lms_map[i] = m++;
  }
  std::vector<I> lms;
  lms.reserve(static_cast<std::size_t>(m));
  for (I i = 1; i < n; ++i) {
    if (!ls[i - 1] && ls[i]) lms.push_back(i);
  }

  induce(lms);

  if (m) {
    std::vector<I> sorted_lms;
    sorted_lms.reserve(static_cast<std::size_t>(m));
    for (I v : sa) {
      if (lms_map[v] != -1) sorted_lms.push_back(v);
    }
    std::vector<I> rec_s(static_cast<std::size_t>(m));
    I rec_upper = 0;
    rec_s[lms_map[sorted_lms[0]]] = 0;
    for (I i = 1; i < m; ++i) {
      I l = sorted_lms[i - 1];
      I r = sorted_lms[i];
      const I end_l = (lms_map[l] + 1 < m) ? lms[lms_map[l] + 1] : n;
      const I end_r = (lms_map[r] + 1 < m) ? lms[lms_map[r] + 1] : n;
      bool same = true;
      if (end_l - l != end_r - r) {
        same = false;
      } else {
        while (l < end_l) {
          if (s[l] != s[r]) break;
          ++l;
          ++r;
        }
        if (l == n || s[l] != s[r]) same = false;
      }
      if (!same) ++rec_upper;
      rec_s[lms_map[sorted_lms[i]]] = rec_upper;
    }
    const auto rec_sa = sa_is<I>(rec_s, rec_upper);
    for (I i = 0; i < m; ++i) sorted_lms[i] = lms[rec_sa[i]];
    induce(sorted_lms);
  }
  return sa;
}

template <typename I>
std::vector<std::uint64_t> build_with(std::span<const std::uint32_t> text) {
  // Rank-compress so bucket arrays are sized by distinct values, not id range.
  std::vector<std::uint32_t> alphabet(text.begin(), text.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  std::vector<I> s(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    s[i] = static_cast<I>(std::lower_bound(alphabet.begin(), alphabet.end(), text[i]) - alphabet.begin());
  }
  const I upper = static_cast<I>(alphabet.size()) - 1;
  std::vector<std::uint32_t>().swap(alphabet);
  const auto sa = sa_is<I>(s, upper);
  std::vector<I>().swap(s);
  return std::vector<std::uint64_t>(sa.begin(), sa.end());
}

}  // namespace

std::vector<std::uint64_t> build_suffix_array(std::span<const std::uint32_t> text) {
  if (text.empty()) return {};
  if (text.size() < static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()) / 2) {
    return build_with<std::int32_t>(text);
  }
  return build_with<std::int64_t>(text);
}

}  // namespace fred

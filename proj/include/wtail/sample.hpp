#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "wtail/error.hpp"

namespace wtail {

// Immutable ascending sample; the only data object the estimators consume.
// Construction goes through ingest() so sortedness and finiteness always hold.
class SortedSample {
  public:
    static SortedSample ingest(std::vector<double> raw) {
        if (raw.empty()) fail(errc::empty_sample, "ingest: sample is empty");
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!std::isfinite(raw[i]))
                fail(errc::invalid_value,
                     "ingest: non-finite value at index " + std::to_string(i));
        }
        std::sort(raw.begin(), raw.end());
        return SortedSample(std::move(raw));
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    // i-th smallest, 1-based: order_statistic(1) = min, order_statistic(n) = max.
    double order_statistic(std::size_t i) const {
        if (i < 1 || i > values_.size()) fail(errc::bad_k, "order_statistic: index out of range");
        return values_[i - 1];
    }

  private:
    explicit SortedSample(std::vector<double> sorted) : values_(std::move(sorted)) {}
    std::vector<double> values_;
};

// Plain-text reader: one value per line, '#' starts a comment line, blank
// lines skipped.  Parsing is locale-independent (std::from_chars).
inline std::vector<double> read_values(std::istream& in) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        std::size_t e = line.find_last_not_of(" \t\r") + 1;
        double v = 0.0;
        const char* first = line.data() + b;
        const char* last = line.data() + e;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            fail(errc::invalid_value,
                 "read_values: cannot parse line " + std::to_string(lineno) + ": '" +
                     line.substr(b, e - b) + "'");
        out.push_back(v);
    }
    return out;
}

// Upper-tail log spacings: (log X_{n-i+1,n} - log X_{n-k+1,n}) for i = 1..k-1.
// Rejects k outside [2, n] and any non-positive entry among the top k.
inline std::vector<double> top_log_spacings(const SortedSample& s, std::size_t k) {
    const std::size_t n = s.size();
    if (k < 2 || k > n) fail(errc::bad_k, "top_log_spacings: need 2 <= k <= n");
    const double base = s.order_statistic(n - k + 1);
    if (!(base > 0.0))
        fail(errc::non_positive_tail,
             "top_log_spacings: order statistic X_{n-k+1,n} is not strictly positive");
    const double log_base = std::log(base);
    std::vector<double> out(k - 1);
    for (std::size_t i = 1; i <= k - 1; ++i)
        out[i - 1] = std::log(s.order_statistic(n - i + 1)) - log_base;
    return out;
}

struct IntermediateCheck {
    double ratio;      // k/n
    bool ok;           // k <= n-1
    std::string note;  // advisory only: one (n,k) pair cannot certify a limit
};

// Advisory check of the intermediate-sequence requirement (k grows, k/n -> 0).
inline IntermediateCheck check_intermediate(std::size_t n, std::size_t k) {
    if (k < 2 || k > n) fail(errc::bad_k, "check_intermediate: need 2 <= k <= n");
    IntermediateCheck r;
    r.ratio = static_cast<double>(k) / static_cast<double>(n);
    r.ok = (k <= n - 1);
    r.note = r.ok ? "advisory: finite (n,k) cannot verify a limiting condition"
                  : "warning: k equals n; intermediate-sequence requirement k/n -> 0 is violated";
    return r;
}

}  // namespace wtail

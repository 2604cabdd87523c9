#include "errid/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "errid/rand.hpp"

namespace errid {

GradCheckReport grad_check(ParameterStore& store, const std::function<double()>& forward,
                           const std::function<void()>& backward, double epsilon,
                           double tolerance, int samples_per_param, std::mt19937_64* rng) {
  GradCheckReport report;
  backward();

  std::vector<std::vector<double>> analytic(store.size());
  for (size_t p = 0; p < store.size(); ++p) analytic[p] = store.at(static_cast<int>(p)).grad.data;

  constexpr size_t kWorstCap = 10;
  for (size_t p = 0; p < store.size(); ++p) {
    Parameter& par = store.at(static_cast<int>(p));
    const std::int64_t n = par.value.size();
    std::vector<std::int64_t> coords;
    if (samples_per_param < 0 || samples_per_param >= n) {
      coords.resize(static_cast<size_t>(n));
      for (std::int64_t i = 0; i < n; ++i) coords[static_cast<size_t>(i)] = i;
    } else {
      for (int i = 0; i < samples_per_param; ++i)
        coords.push_back(static_cast<std::int64_t>(
            uniform_below(*rng, static_cast<std::uint64_t>(n))));
    }
    for (std::int64_t c : coords) {
      double saved = par.value.data[static_cast<size_t>(c)];
      par.value.data[static_cast<size_t>(c)] = saved + epsilon;
      double up = forward();
      par.value.data[static_cast<size_t>(c)] = saved - epsilon;
      double down = forward();
      par.value.data[static_cast<size_t>(c)] = saved;
      double numeric = (up - down) / (2.0 * epsilon);
      double a = analytic[p][static_cast<size_t>(c)];
      double rel = std::fabs(a - numeric) / std::max({1.0, std::fabs(a), std::fabs(numeric)});
      ++report.coords_checked;
      if (rel > report.max_rel_err) report.max_rel_err = rel;
      if (rel > tolerance) {
        GradCheckIssue issue{par.name, static_cast<int>(c), a, numeric, rel};
        report.worst.push_back(issue);
        std::sort(report.worst.begin(), report.worst.end(),
                  [](const GradCheckIssue& x, const GradCheckIssue& y) {
                    return x.rel_err > y.rel_err;
                  });
        if (report.worst.size() > kWorstCap) report.worst.resize(kWorstCap);
      }
    }
  }
  return report;
}

}  // namespace errid

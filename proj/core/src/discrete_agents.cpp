#include "diffuse/discrete_agents.hpp"

#include <algorithm>
#include <numeric>

namespace diffuse {

DiscreteAgent::DiscreteAgent(bool tie_toward_request, DiffusionMode mode)
    : tie_toward_request_(tie_toward_request), mode_(mode) {}

double DiscreteAgent::step(const FiniteSet1D& current, double p_req) {
  if (current.empty()) throw ContractViolation("empty codebook");
  if (p_req < current.min() - kPointTol || p_req > current.max() + kPointTol)
    throw ContractViolation("request not in advertised profile");
  delta_seen_ = std::max(delta_seen_, max_stepsize(current));
  const auto tie = tie_toward_request_ ? std::optional<double>(p_req) : std::nullopt;
  const double x = mode_ == DiffusionMode::kErrorDiffusion ? p_req - state_.e().p : p_req;
  const double imp = project_finite(current, x, tie);
  state_.record({p_req, 0.0}, {imp, 0.0});
  return imp;
}

namespace {

enum class Comfort { kCold, kInBand, kHot };

Comfort classify(const HeaterState& h, const ComfortBand& band) {
  if (h.temperature < band.t_min) return Comfort::kCold;
  if (h.temperature > band.t_max) return Comfort::kHot;
  return Comfort::kInBand;
}

bool is_free(const HeaterState& h, const ComfortBand& band) {
  return !h.locked() && classify(h, band) == Comfort::kInBand;
}

// Power drawn regardless of the decision: locked heaters keep their state,
// unlocked ones outside the band are forced on or off.
double forced_power(std::span<const HeaterState> heaters, const ComfortBand& band) {
  double a = 0.0;
  for (const auto& h : heaters) {
    if (h.locked())
      a += h.power();
    else if (classify(h, band) == Comfort::kCold)
      a -= h.p_heat;
  }
  return a;
}

constexpr std::size_t kMaxFreeHeaters = 20;

double sum_tol(std::span<const HeaterState> heaters) {
  double total = 0.0;
  for (const auto& h : heaters) total += h.p_heat;
  return kPointTol * std::max(1.0, total);
}

bool subset_reaches(const std::vector<double>& p, std::size_t from, double amount, double tol) {
  if (std::abs(amount) <= tol) return true;
  if (amount < -tol || from == p.size()) return false;
  return subset_reaches(p, from + 1, amount - p[from], tol) ||
         subset_reaches(p, from + 1, amount, tol);
}

}  // namespace

FiniteSet1D heater_implementable(const HeaterState& h, const ComfortBand& band) {
  if (h.locked()) return FiniteSet1D({h.power()});
  switch (classify(h, band)) {
    case Comfort::kCold:
      return FiniteSet1D({-h.p_heat});
    case Comfort::kHot:
      return FiniteSet1D({0.0});
    case Comfort::kInBand:
      break;
  }
  return h.p_heat > 0.0 ? FiniteSet1D({-h.p_heat, 0.0}) : FiniteSet1D({0.0});
}

FiniteSet1D multi_heater_implementable(std::span<const HeaterState> heaters,
                                       const ComfortBand& band) {
  if (heaters.empty()) throw ContractViolation("heater bank is empty");
  std::vector<double> free;
  for (const auto& h : heaters)
    if (is_free(h, band)) free.push_back(h.p_heat);
  if (free.size() > kMaxFreeHeaters) throw ContractViolation("too many free heaters to enumerate");
  std::vector<double> sums{forced_power(heaters, band)};
  for (double p : free) {
    const std::size_t n = sums.size();
    for (std::size_t i = 0; i < n; ++i) sums.push_back(sums[i] - p);
  }
  std::sort(sums.begin(), sums.end());
  std::vector<double> merged;
  for (double s : sums)
    if (merged.empty() || s - merged.back() > kPointTol) merged.push_back(s);
  return FiniteSet1D(std::move(merged));
}

HeaterState heater_transition(const HeaterState& h, bool turn_on, int lock_steps) {
  if (lock_steps < 0) throw ContractViolation("lock duration must be non-negative");
  HeaterState next = h;
  if (turn_on != h.on) {
    if (h.locked()) throw ContractViolation("heater switched while locked");
    next.on = turn_on;
    next.lock_remaining = lock_steps;
  } else {
    next.lock_remaining = std::max(0, h.lock_remaining - 1);
  }
  return next;
}

std::vector<std::size_t> select_heater_subset(double target,
                                              std::span<const HeaterState> heaters,
                                              const ComfortBand& band) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < heaters.size(); ++i)
    if (is_free(heaters[i], band)) order.push_back(i);
  if (order.size() > kMaxFreeHeaters) throw ContractViolation("too many free heaters to enumerate");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return heaters[a].temperature < heaters[b].temperature;
  });
  std::vector<double> p;
  for (auto i : order) p.push_back(heaters[i].p_heat);

  const double tol = sum_tol(heaters);
  double remaining = forced_power(heaters, band) - target;
  if (!subset_reaches(p, 0, remaining, tol))
    throw ContractViolation("no heater subset achieves the target power");
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (std::abs(remaining) <= tol) break;
    if (subset_reaches(p, j + 1, remaining - p[j], tol)) {
      chosen.push_back(order[j]);
      remaining -= p[j];
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

HeaterBankAgent::HeaterBankAgent(HeaterBankConfig cfg, std::span<const double> initial_temperatures)
    : cfg_(std::move(cfg)), agent_(cfg_.tie_toward_request, cfg_.mode) {
  if (cfg_.p_heat.empty()) throw ContractViolation("heater bank is empty");
  if (initial_temperatures.size() != cfg_.p_heat.size())
    throw ContractViolation("one initial temperature per heater is required");
  if (!cfg_.initial_on.empty() && cfg_.initial_on.size() != cfg_.p_heat.size())
    throw ContractViolation("initial_on must list every heater");
  for (std::size_t i = 0; i < cfg_.p_heat.size(); ++i) {
    if (!(cfg_.p_heat[i] > 0.0)) throw ContractViolation("heater power must be positive");
    HeaterState h;
    h.p_heat = cfg_.p_heat[i];
    h.on = !cfg_.initial_on.empty() && cfg_.initial_on[i];
    h.temperature = initial_temperatures[i];
    heaters_.push_back(h);
  }
}

FiniteSet1D HeaterBankAgent::implementable() const {
  return multi_heater_implementable(heaters_, cfg_.band);
}

double HeaterBankAgent::step(double p_req) {
  const double imp = agent_.step(implementable(), p_req);
  const auto chosen = select_heater_subset(imp, heaters_, cfg_.band);
  for (std::size_t i = 0; i < heaters_.size(); ++i) {
    const auto& h = heaters_[i];
    bool on = h.on;
    if (!h.locked()) {
      switch (classify(h, cfg_.band)) {
        case Comfort::kCold: on = true; break;
        case Comfort::kHot: on = false; break;
        case Comfort::kInBand:
          on = std::find(chosen.begin(), chosen.end(), i) != chosen.end();
          break;
      }
    }
    heaters_[i] = heater_transition(h, on, cfg_.lock_steps);
  }
  return imp;
}

double HeaterBankAgent::power() const {
  return std::accumulate(heaters_.begin(), heaters_.end(), 0.0,
                         [](double acc, const HeaterState& h) { return acc + h.power(); });
}

double HeaterBankAgent::error_bound() const {
  return 0.5 * *std::max_element(cfg_.p_heat.begin(), cfg_.p_heat.end());
}

}  // namespace diffuse

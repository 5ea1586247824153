#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "ranklaw/fit.hpp"
#include "ranklaw/goodness.hpp"
#include "ranklaw/segmentation.hpp"
#include "ranklaw/series.hpp"
#include "ranklaw/stats.hpp"

namespace ranklaw {

namespace detail {

inline nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

template <typename Opt>
nlohmann::json optional_or_null(const Opt& o) {
  if (o) return *o;
  return nullptr;
}

}  // namespace detail

inline nlohmann::json to_json(const SummaryStats& s) {
  return {
      {"n", s.n},
      {"minimum", s.minimum},
      {"maximum", s.maximum},
      {"mean", s.mean},
      {"median", s.median},
      {"rms", s.rms},
      {"variance", s.variance},
      {"std_error", s.std_error},
      {"skewness", detail::optional_or_null(s.skewness)},
      {"kurtosis_excess", detail::optional_or_null(s.kurtosis_excess)},
      {"mean_over_sigma", detail::optional_or_null(s.mean_over_sigma)},
  };
}

inline nlohmann::json to_json(const FitResult& f) {
  nlohmann::json params = nlohmann::json::object();
  const auto names = param_names(f.model.family);
  for (std::size_t i = 0; i < names.size(); ++i)
    params[std::string(names[i])] = f.params.values[i];
  return {
      {"model", {{"family", family_name(f.model.family)}, {"n_context", f.model.n_context}}},
      {"params", params},
      {"chi_square", f.chi_square},
      {"r_squared", detail::number_or_null(f.r_squared)},
      {"dof", f.dof},
      {"dof_conventional", f.dof_conventional},
      {"iterations", f.iterations},
      {"converged", f.converged},
      {"termination", termination_name(f.termination)},
  };
}

inline nlohmann::json to_json(const ModelComparison& cmp) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : cmp.entries) {
    arr.push_back({
        {"family", family_name(e.family)},
        {"chi_square", e.chi_square},
        {"r_squared", detail::number_or_null(e.r_squared)},
        {"n_params", e.n_params},
        {"rank", e.rank},
    });
  }
  return arr;
}

inline nlohmann::json to_json(const RankInterval& iv) { return {{"lo", iv.lo}, {"hi", iv.hi}}; }

inline nlohmann::json to_json(const SegmentationResult& s) {
  return {
      {"r1", s.r1},
      {"shoulder_rank", detail::optional_or_null(s.shoulder_rank)},
      {"classes", nlohmann::json::array({to_json(s.top), to_json(s.middle), to_json(s.tail)})},
      {"top_fit", s.top_fit ? to_json(*s.top_fit) : nlohmann::json(nullptr)},
      {"middle_fit", to_json(s.middle_fit)},
  };
}

inline nlohmann::json to_json(const std::vector<RankMotion>& motions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : motions) {
    arr.push_back({
        {"label", m.label},
        {"rank_a", detail::optional_or_null(m.rank_a)},
        {"rank_b", detail::optional_or_null(m.rank_b)},
        {"verdict", motion_verdict_name(m.verdict)},
    });
  }
  return arr;
}

}  // namespace ranklaw

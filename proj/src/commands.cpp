#include "instructkit/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <tuple>

#include "instructkit/errors.hpp"
#include "instructkit/feasibility.hpp"
#include "instructkit/instruction_gen.hpp"
#include "instructkit/motion_attributes.hpp"
#include "instructkit/parallel.hpp"
#include "instructkit/scenario_io.hpp"
#include "instructkit/synth.hpp"
#include "json_reader.hpp"

namespace instructkit {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::pair<std::size_t, std::string_view>> jsonl_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) out.emplace_back(line_no, line);
    pos = end + 1;
  }
  return out;
}

namespace {

template <class Fn>
auto parse_jsonl(std::string_view text, unsigned jobs, Fn parse_one) {
  const auto lines = jsonl_lines(text);
  return parallel_map(lines, jobs, [&](const std::pair<std::size_t, std::string_view>& ln) {
    const std::string where = "line " + std::to_string(ln.first) + ": ";
    json j;
    try {
      j = json::parse(ln.second);
    } catch (const json::parse_error& e) {
      throw InputError(where + "invalid JSON (" + e.what() + ")");
    }
    try {
      return parse_one(j);
    } catch (const Error& e) {
      throw InputError(where + std::string(error_kind_name(e.kind())) + ": " + e.what());
    }
  });
}

std::string join_lines(const std::vector<ordered_json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

ordered_json error_row(const std::string& scenario_id, const Error& e) {
  ordered_json j;
  j["scenario_id"] = scenario_id;
  j["error"] = std::string(error_kind_name(e.kind()));
  j["message"] = e.what();
  return j;
}

ordered_json step_json(const StepAttributes& s) {
  ordered_json j;
  j["direction"] = std::string(to_string(s.direction));
  j["speed"] = std::string(to_string(s.speed));
  j["accel"] = std::string(to_string(s.accel));
  return j;
}

ordered_json two_step_json(const TwoStep& t) {
  ordered_json j;
  j["step1"] = step_json(t.first);
  j["step2"] = step_json(t.second);
  return j;
}

template <class T>
void sort_by_scenario(std::vector<T>& items, const std::vector<std::string>& ids) {
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  std::vector<T> sorted;
  sorted.reserve(items.size());
  for (auto i : order) sorted.push_back(std::move(items[i]));
  items = std::move(sorted);
}

std::vector<Scenario> parse_scenarios(std::string_view text, unsigned jobs) {
  auto scenarios = parse_jsonl(text, jobs, [](const json& j) { return scenario_from_json(j); });
  std::vector<std::string> ids;
  for (const auto& s : scenarios) ids.push_back(s.scenario_id);
  sort_by_scenario(scenarios, ids);
  return scenarios;
}

template <class Fn>
std::string per_scenario(std::string_view text, const Config& config, Fn fn) {
  const auto scenarios = parse_scenarios(text, config.jobs);
  const auto rows = parallel_map(scenarios, config.jobs, [&](const Scenario& s) {
    try {
      return fn(s);
    } catch (const Error& e) {
      return error_row(s.scenario_id, e);
    }
  });
  return join_lines(rows);
}

ordered_json directions_json(const std::set<DirectionLabel>& set) {
  ordered_json out = ordered_json::array();
  for (auto d : kAllDirections) {
    if (set.contains(d)) out.push_back(std::string(to_string(d)));
  }
  return out;
}

}  // namespace

std::string cmd_extract(std::string_view scenarios_jsonl, const Config& config) {
  return per_scenario(scenarios_jsonl, config, [&](const Scenario& s) {
    const auto& focal = s.focal();
    const auto a = extract_attributes(focal, s.horizon, config.attributes);
    const auto behavior = classify_behavior(focal, s.horizon, config.behavior);
    ordered_json j;
    j["scenario_id"] = s.scenario_id;
    j["focal_agent_id"] = s.focal_agent_id;
    j["fine_direction"] = std::string(to_string(a.fine));
    j["direction"] = std::string(to_string(a.direction));
    j["speed"] = std::string(to_string(a.speed));
    j["accel"] = std::string(to_string(a.accel));
    j["mean_speed_kmh"] = a.mean_speed_kmh;
    j["delta_v_kmh"] = a.delta_v_kmh;
    j["two_step"] = two_step_json(a.two_step);
    j["behavior"] = std::string(to_string(behavior));
    return j;
  });
}

std::string cmd_feasibility(std::string_view scenarios_jsonl, const Config& config) {
  return per_scenario(scenarios_jsonl, config, [&](const Scenario& s) {
    const auto r = feasibility_set(s, config.feasibility, config.attributes);
    ordered_json j;
    j["scenario_id"] = s.scenario_id;
    j["gt_direction"] = std::string(to_string(r.gt_direction));
    j["feasible"] = directions_json(r.feasible);
    j["infeasible"] = directions_json(r.infeasible);
    j["candidates_examined"] = r.candidates_examined;
    return j;
  });
}

std::string cmd_gen(std::string_view scenarios_jsonl, const Config& config,
                    const GenOptions& options) {
  if (options.mode == GenMode::kBehavior && !options.guidelines) {
    throw ConfigError("behavior mode needs a guideline book (--guidelines)");
  }
  const auto scenarios = parse_scenarios(scenarios_jsonl, config.jobs);
  struct Built {
    std::vector<InstructionRecord> rows;
    std::optional<std::string> error;
  };
  auto built = parallel_map(scenarios, config.jobs, [&](const Scenario& s) {
    Built b;
    try {
      b.rows = options.mode == GenMode::kDirection
                   ? build_direction_rows(s, config.feasibility, config.attributes)
                   : build_behavior_rows(s, *options.guidelines, s.horizon, config.behavior);
    } catch (const Error& e) {
      b.error = s.scenario_id + ": " + std::string(error_kind_name(e.kind())) + ": " + e.what();
    }
    return b;
  });

  std::vector<InstructionRecord> rows;
  for (auto& b : built) {
    if (b.error) std::cerr << "warning: skipped " << *b.error << '\n';
    for (auto& r : b.rows) rows.push_back(std::move(r));
  }
  if (options.sample) {
    const auto n = options.count.value_or(rows.size());
    rows = sample_training_mix(std::move(rows), config.sampler, n);
  }
  std::vector<ordered_json> lines;
  lines.reserve(rows.size());
  for (const auto& r : rows) lines.push_back(record_to_json(r));
  return join_lines(lines);
}

PredictionRecord prediction_from_json(const json& j) {
  using Reader = detail::ObjectReader<SchemaError>;
  Reader r(j, "prediction");
  PredictionRecord rec;
  rec.set.scenario_id = r.string("scenario_id");
  const auto& trajs = Reader::as_array(r.required("trajectories"), r.child("trajectories"));
  for (const auto& t : trajs) rec.set.trajectories.push_back(xy_trajectory_from_json(t));
  const auto& scores = Reader::as_array(r.required("scores"), r.child("scores"));
  for (const auto& s : scores) rec.set.scores.push_back(Reader::as_number(s, r.child("scores")));

  auto enum_field = [&](std::string_view key, auto from_string) {
    using E = typename decltype(from_string(std::string_view{}))::value_type;
    std::optional<E> out;
    if (const auto* v = r.optional(key)) {
      const auto text = Reader::as_string(*v, r.child(key));
      out = from_string(text);
      if (!out) throw SchemaError(r.child(key) + ": unknown value '" + text + "'");
    }
    return out;
  };
  rec.direction = enum_field("direction", direction_from_string);
  rec.behavior = enum_field("behavior", behavior_from_string);
  rec.decision = enum_field("decision", decision_from_string);
  if (const auto* v = r.optional("score_kind")) {
    const auto text = Reader::as_string(*v, r.child("score_kind"));
    if (text == "logits") rec.score_kind = ScoreKind::kLogits;
    else if (text == "probabilities") rec.score_kind = ScoreKind::kProbabilities;
    else throw SchemaError(r.child("score_kind") + ": expected 'logits' or 'probabilities'");
  }
  if (const auto* v = r.optional("gmm")) {
    GmmTrajectory g;
    for (const auto& mode : Reader::as_array(*v, r.child("gmm"))) {
      std::vector<GaussianStep> steps;
      for (const auto& st : Reader::as_array(mode, r.child("gmm"))) {
        if (!st.is_array() || st.size() != 4) {
          throw SchemaError(r.child("gmm") + ": each step must be [mu_x, mu_y, sigma_x, sigma_y]");
        }
        steps.push_back({Reader::as_number(st[0], r.child("gmm")),
                         Reader::as_number(st[1], r.child("gmm")),
                         Reader::as_number(st[2], r.child("gmm")),
                         Reader::as_number(st[3], r.child("gmm"))});
      }
      g.modes.push_back(std::move(steps));
    }
    rec.gmm = std::move(g);
  }
  if (const auto* v = r.optional("origin")) {
    Reader o(*v, r.child("origin"));
    TrajectoryPoint p;
    p.x = o.number("x");
    p.y = o.number("y");
    p.heading = o.number("heading");
    p.speed = o.number("speed");
    o.finish();
    rec.set.origin = p;
  }
  if (const auto* v = r.optional("ground_truth")) rec.ground_truth = xy_trajectory_from_json(*v);
  r.finish();
  rec.set.validate();
  return rec;
}

ordered_json prediction_to_json(const PredictionRecord& rec) {
  ordered_json j;
  j["scenario_id"] = rec.set.scenario_id;
  if (rec.direction) j["direction"] = std::string(to_string(*rec.direction));
  if (rec.behavior) j["behavior"] = std::string(to_string(*rec.behavior));
  if (rec.decision) j["decision"] = std::string(to_string(*rec.decision));
  ordered_json trajs = ordered_json::array();
  for (const auto& t : rec.set.trajectories) trajs.push_back(xy_trajectory_to_json(t));
  j["trajectories"] = std::move(trajs);
  j["scores"] = rec.set.scores;
  if (rec.score_kind) {
    j["score_kind"] = *rec.score_kind == ScoreKind::kLogits ? "logits" : "probabilities";
  }
  if (rec.gmm) {
    ordered_json modes = ordered_json::array();
    for (const auto& m : rec.gmm->modes) {
      ordered_json steps = ordered_json::array();
      for (const auto& s : m) steps.push_back({s.mu_x, s.mu_y, s.sigma_x, s.sigma_y});
      modes.push_back(std::move(steps));
    }
    j["gmm"] = std::move(modes);
  }
  if (rec.set.origin) {
    const auto& o = *rec.set.origin;
    j["origin"] = {{"x", o.x}, {"y", o.y}, {"heading", o.heading}, {"speed", o.speed}};
  }
  if (rec.ground_truth) j["ground_truth"] = xy_trajectory_to_json(*rec.ground_truth);
  return j;
}

namespace {

struct RowKey {
  std::string scenario_id;
  int kind = 0;  // 0 direction, 1 behavior
  int label = 0;
  auto operator<=>(const RowKey&) const = default;
};

struct PredictionEval {
  RowKey key;
  const InstructionRecord* row = nullptr;
  std::optional<ScenarioIfr> ifr;
  std::optional<double> min_ade;
  std::optional<double> min_fde;
  bool no_overlap = false;
  std::optional<double> nll;
  std::optional<double> ce;
};

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json percent_of(const ordered_json& j) {
  if (j.is_number()) return j.get<double>() * 100.0;
  if (j.is_object()) {
    ordered_json out = ordered_json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = percent_of(it.value());
    return out;
  }
  return j;
}

ordered_json tag_json(const TagAccuracy& t) { return optional_number(t.accuracy); }

ordered_json ifr_block(const std::vector<IfrRow>& rows) {
  ordered_json j;
  if (rows.empty()) {
    j["micro"] = nullptr;
    j["macro"] = nullptr;
    return j;
  }
  const auto m = ifr_macro(rows);
  j["micro"] = m.micro;
  j["macro"] = m.macro;
  return j;
}

XYTrajectory scenario_future(const Scenario& s) {
  XYTrajectory out;
  const auto& focal = s.focal();
  for (int i = s.horizon.current_step() + 1; i <= s.horizon.last_step(); ++i) {
    if (i >= static_cast<int>(focal.points.size())) {
      out.push_back({0.0, 0.0, false});
      continue;
    }
    const auto& p = focal.points[static_cast<std::size_t>(i)];
    out.push_back({p.x, p.y, p.valid});
  }
  return out;
}

}  // namespace

std::string cmd_evaluate(const EvalInputs& inputs, const Config& config) {
  const unsigned jobs = config.jobs;
  const auto rows =
      parse_jsonl(inputs.dataset_jsonl, jobs, [](const json& j) { return record_from_json(j); });
  const auto pred_lines = jsonl_lines(inputs.predictions_jsonl);
  const auto preds = parse_jsonl(inputs.predictions_jsonl, jobs,
                                 [](const json& j) { return prediction_from_json(j); });

  std::map<RowKey, const InstructionRecord*> by_key;
  for (const auto& r : rows) {
    RowKey k{r.scenario_id, r.direction ? 0 : 1,
             r.direction ? static_cast<int>(index_of(*r.direction))
                         : static_cast<int>(index_of(r.behavior.value_or(BehaviorLabel{})))};
    if (!r.direction && !r.behavior) throw InputError("dataset row without direction or behavior");
    if (!by_key.emplace(k, &r).second) {
      throw InputError("duplicate dataset row for scenario '" + r.scenario_id + "'");
    }
  }

  std::map<std::string, Scenario, std::less<>> scenarios;
  if (inputs.scenarios_jsonl) {
    for (auto& s : parse_scenarios(*inputs.scenarios_jsonl, jobs)) {
      auto id = s.scenario_id;
      scenarios.emplace(std::move(id), std::move(s));
    }
  }

  std::vector<std::size_t> indices(preds.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  auto evals = parallel_map(indices, jobs, [&](std::size_t i) {
    const auto& p = preds[i];
    const std::string where = "line " + std::to_string(pred_lines[i].first) + ": ";
    PredictionEval ev;
    if (p.direction) {
      ev.key = {p.set.scenario_id, 0, static_cast<int>(index_of(*p.direction))};
    } else if (p.behavior) {
      ev.key = {p.set.scenario_id, 1, static_cast<int>(index_of(*p.behavior))};
    } else {
      throw InputError(where + "prediction names neither a direction nor a behavior");
    }
    const auto it = by_key.find(ev.key);
    if (it == by_key.end()) {
      throw InputError(where + "no dataset row for scenario '" + p.set.scenario_id +
                       "' and this instruction");
    }
    ev.row = it->second;

    const auto sc = scenarios.find(p.set.scenario_id);
    const Scenario* scenario = sc == scenarios.end() ? nullptr : &sc->second;
    const HorizonConfig& horizon = scenario ? scenario->horizon : config.horizon;
    PredictionSet set = p.set;
    if (!set.origin && scenario) {
      set.origin = scenario->focal().points.at(static_cast<std::size_t>(horizon.current_step()));
    }
    std::optional<XYTrajectory> gt = p.ground_truth;
    if (!gt && scenario) gt = scenario_future(*scenario);

    try {
      if (p.direction && ev.row->feas_tag && *ev.row->feas_tag != FeasTag::kIF) {
        ev.ifr = ifr_scenario(*p.direction, set, horizon.dt, config.attributes);
      }
      if (gt && ev.row->feas_tag == FeasTag::kGT) {
        try {
          ev.min_ade = min_ade(*gt, set);
          ev.min_fde = min_fde(*gt, set);
        } catch (const NoValidOverlap&) {
          ev.no_overlap = true;
        }
      }
      if (gt && p.gmm) {
        const auto best = best_mode(*p.gmm, *gt, horizon.t_select);
        ev.nll = gmm_nll(*p.gmm, *gt, best, horizon.t_select);
        ev.ce = score_loss(set.scores, best, p.score_kind.value_or(config.score_kind));
      }
    } catch (const Error& e) {
      throw InputError(where + std::string(error_kind_name(e.kind())) + ": " + e.what());
    } catch (const std::logic_error& e) {
      throw InputError(where + e.what());
    }
    return ev;
  });
  std::stable_sort(evals.begin(), evals.end(),
                   [](const auto& a, const auto& b) { return a.key < b.key; });
  for (std::size_t i = 1; i < evals.size(); ++i) {
    if (evals[i].key == evals[i - 1].key) {
      throw InputError("duplicate prediction for scenario '" + evals[i].key.scenario_id +
                       "' and the same instruction");
    }
  }

  std::vector<IfrRow> ifr_all, ifr_gt, ifr_f;
  std::vector<double> ade_values, fde_values, nll_values, ce_values;
  std::vector<DetectionSample> detection;
  std::vector<SafetySample> safety;
  int unclassifiable = 0;
  int no_overlap = 0;
  ordered_json per_row = ordered_json::array();
  for (const auto& ev : evals) {
    const auto* row = ev.row;
    if (ev.ifr) {
      const IfrRow r{*row->direction, ev.ifr->value};
      ifr_all.push_back(r);
      (*row->feas_tag == FeasTag::kGT ? ifr_gt : ifr_f).push_back(r);
      unclassifiable += ev.ifr->unclassifiable;
      ordered_json pr;
      pr["scenario_id"] = ev.key.scenario_id;
      pr["instructed"] = std::string(to_string(*row->direction));
      pr["feas_tag"] = std::string(to_string(*row->feas_tag));
      pr["ifr"] = ev.ifr->value;
      pr["matches"] = ev.ifr->matches;
      pr["modes"] = ev.ifr->modes;
      per_row.push_back(std::move(pr));
    }
    if (ev.min_ade) {
      ade_values.push_back(*ev.min_ade);
      fde_values.push_back(*ev.min_fde);
    }
    if (ev.no_overlap) ++no_overlap;
    if (ev.nll) {
      nll_values.push_back(*ev.nll);
      ce_values.push_back(*ev.ce);
    }
  }
  // Decisions are reduced in the same sorted order.
  std::vector<std::pair<RowKey, std::size_t>> decision_order;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!preds[i].decision) continue;
    const auto& p = preds[i];
    RowKey k = p.direction ? RowKey{p.set.scenario_id, 0, static_cast<int>(index_of(*p.direction))}
                           : RowKey{p.set.scenario_id, 1, static_cast<int>(index_of(*p.behavior))};
    decision_order.emplace_back(std::move(k), i);
  }
  std::stable_sort(decision_order.begin(), decision_order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, i] : decision_order) {
    const auto* row = by_key.at(key);
    if (row->feas_tag) detection.push_back({*preds[i].decision, *row->feas_tag});
    if (row->safety_tag) safety.push_back({*preds[i].decision, *row->safety_tag, row->with_context});
  }

  ordered_json report;
  report["command"] = "evaluate";
  report["config"] = config_to_json(config);
  ordered_json in;
  in["dataset"] = content_hash(inputs.dataset_jsonl);
  in["predictions"] = content_hash(inputs.predictions_jsonl);
  if (inputs.scenarios_jsonl) in["scenarios"] = content_hash(*inputs.scenarios_jsonl);
  report["inputs"] = in;

  ordered_json counts;
  counts["dataset_rows"] = rows.size();
  counts["predictions"] = preds.size();
  counts["ifr_rows"] = ifr_all.size();
  counts["gt_ifr_rows"] = ifr_gt.size();
  counts["f_ifr_rows"] = ifr_f.size();
  counts["displacement_rows"] = ade_values.size();
  counts["decisions"] = decision_order.size();
  counts["unclassifiable_modes"] = unclassifiable;
  counts["no_valid_overlap"] = no_overlap;
  report["counts"] = counts;

  ordered_json rates;
  std::optional<MacroIfr> macro;
  if (!ifr_all.empty()) macro = ifr_macro(ifr_all);
  rates["ifr_micro"] = macro ? ordered_json(macro->micro) : ordered_json(nullptr);
  rates["ifr_macro"] = macro ? ordered_json(macro->macro) : ordered_json(nullptr);
  ordered_json per_class = ordered_json::object();
  ordered_json absent = ordered_json::array();
  for (auto d : kAllDirections) {
    if (macro && macro->per_class.contains(d)) {
      per_class[std::string(to_string(d))] = macro->per_class.at(d);
    } else {
      absent.push_back(std::string(to_string(d)));
    }
  }
  rates["per_class_ifr"] = per_class;
  rates["gt_ifr"] = ifr_block(ifr_gt);
  rates["f_ifr"] = ifr_block(ifr_f);
  const auto det = detection_accuracy(detection);
  rates["feas_accuracy"] = {{"GT", tag_json(det.gt)}, {"F", tag_json(det.f)},
                            {"IF", tag_json(det.infeasible)}};
  const auto saf = safety_accuracy(safety);
  rates["safety_accuracy"] = {{"safe_with_context", tag_json(saf.safe_with_context)},
                              {"safe_without_context", tag_json(saf.safe_without_context)},
                              {"unsafe_with_context", tag_json(saf.unsafe_with_context)},
                              {"unsafe_without_context", tag_json(saf.unsafe_without_context)}};

  for (auto it = rates.begin(); it != rates.end(); ++it) report[it.key()] = it.value();
  report["absent_classes"] = absent;
  report["min_ade"] = ade_values.empty() ? ordered_json(nullptr) : ordered_json(pairwise_mean(ade_values));
  report["min_fde"] = fde_values.empty() ? ordered_json(nullptr) : ordered_json(pairwise_mean(fde_values));
  if (nll_values.empty()) {
    report["loss"] = nullptr;
  } else {
    const double nll = pairwise_mean(nll_values);
    const double ce = pairwise_mean(ce_values);
    report["loss"] = {{"nll", nll}, {"ce", ce}, {"combined", combined_loss(nll, ce, config.loss_sign)},
                      {"rows", nll_values.size()}};
  }
  report["percent"] = percent_of(rates);
  report["per_row"] = per_row;
  return report.dump(2) + "\n";
}

std::string cmd_stats(std::string_view dataset_jsonl, const Config& config) {
  const auto rows =
      parse_jsonl(dataset_jsonl, config.jobs, [](const json& j) { return record_from_json(j); });

  std::map<Decision, std::size_t> decisions;
  std::map<FeasTag, std::size_t> feas;
  std::map<Safety, std::size_t> safety;
  std::map<DirectionLabel, std::size_t> directions, gt_directions;
  std::map<BehaviorLabel, std::size_t> behaviors;
  std::set<std::string> scenario_ids;
  std::size_t with_gt = 0;
  for (const auto& r : rows) {
    ++decisions[r.decision];
    if (r.feas_tag) ++feas[*r.feas_tag];
    if (r.safety_tag) ++safety[*r.safety_tag];
    if (r.direction) ++directions[*r.direction];
    if (r.behavior) ++behaviors[*r.behavior];
    if (r.direction && r.feas_tag == FeasTag::kGT) ++gt_directions[*r.direction];
    if (r.has_gt_trajectory) ++with_gt;
    scenario_ids.insert(r.scenario_id);
  }
  auto count_of = [](const auto& m, auto key) {
    const auto it = m.find(key);
    return it == m.end() ? std::size_t{0} : it->second;
  };

  ordered_json j;
  j["command"] = "stats";
  j["config"] = config_to_json(config);
  j["inputs"] = {{"dataset", content_hash(dataset_jsonl)}};
  j["rows"] = rows.size();
  j["scenarios"] = scenario_ids.size();
  j["decision"] = {{"Accept", count_of(decisions, Decision::kAccept)},
                   {"Reject", count_of(decisions, Decision::kReject)}};
  j["feas_tag"] = {{"GT", count_of(feas, FeasTag::kGT)},
                   {"F", count_of(feas, FeasTag::kF)},
                   {"IF", count_of(feas, FeasTag::kIF)}};
  j["safety_tag"] = {{"safe", count_of(safety, Safety::kSafe)},
                     {"unsafe", count_of(safety, Safety::kUnsafe)}};
  ordered_json dir = ordered_json::object();
  ordered_json gt = ordered_json::object();
  ordered_json presence = ordered_json::object();
  const std::size_t gt_total = count_of(feas, FeasTag::kGT);
  for (auto d : kAllDirections) {
    const std::string name(to_string(d));
    dir[name] = count_of(directions, d);
    gt[name] = count_of(gt_directions, d);
    presence[name] = gt_total == 0 ? 0.0
                                   : static_cast<double>(count_of(gt_directions, d)) /
                                         static_cast<double>(gt_total);
  }
  j["instructed_direction"] = dir;
  j["gt_direction"] = gt;
  j["gt_direction_presence"] = presence;
  ordered_json beh = ordered_json::object();
  for (auto b : kAllBehaviors) beh[std::string(to_string(b))] = count_of(behaviors, b);
  j["instructed_behavior"] = beh;
  j["has_gt_trajectory"] = with_gt;
  return j.dump(2) + "\n";
}

SynthOutputs cmd_synth(std::string_view suite, std::size_t count, std::uint64_t seed,
                       const Config& config) {
  const auto cases =
      synth::gen_suite(suite, count, seed, config.horizon, config.attributes, config.behavior);
  std::vector<std::size_t> indices(cases.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;

  struct Lines {
    std::string corpus, expected, predictions;
  };
  const auto lines = parallel_map(indices, config.jobs, [&](std::size_t i) {
    const auto& c = cases[i];
    Lines l;
    l.corpus = serialize_scenario(c.scenario) + "\n";

    ordered_json e;
    e["scenario_id"] = c.scenario.scenario_id;
    e["fine_direction"] = std::string(to_string(c.expected.fine));
    e["direction"] = std::string(to_string(c.expected.direction));
    e["speed"] = std::string(to_string(c.expected.speed));
    e["accel"] = std::string(to_string(c.expected.accel));
    e["behavior"] = std::string(to_string(c.expected.behavior));
    e["two_step"] = two_step_json(*c.expected.two_step);
    e["topology"] = std::string(synth::to_string(c.topology));
    if (c.expected_lane_directions) {
      e["expected_lane_directions"] = directions_json(*c.expected_lane_directions);
    }
    const auto& sp = c.spec;
    e["spec"] = {{"kind", std::string(synth::to_string(sp.kind))},
                 {"side", sp.side == synth::TurnSide::kLeft ? "left" : "right"},
                 {"radius", sp.radius},
                 {"angle_deg", sp.angle_deg},
                 {"lateral_offset", sp.lateral_offset},
                 {"v0", sp.v0},
                 {"v_mid", sp.v_mid},
                 {"v1", sp.v1},
                 {"dwell_s", sp.dwell_s}};
    l.expected = e.dump() + "\n";

    const auto& focal = c.scenario.focal();
    auto generated = synth::gen_prediction_set(focal, c.expected.fine, c.scenario.horizon,
                                               static_cast<int>(i % 7), 6);
    PredictionRecord rec;
    rec.set = std::move(generated.set);
    rec.set.scenario_id = c.scenario.scenario_id;
    rec.direction = c.expected.direction;
    rec.decision = Decision::kAccept;
    rec.ground_truth = synth::future_xy(focal, c.scenario.horizon);
    l.predictions = prediction_to_json(rec).dump() + "\n";
    return l;
  });

  SynthOutputs out;
  for (const auto& l : lines) {
    out.corpus += l.corpus;
    out.expected += l.expected;
    out.predictions += l.predictions;
  }
  return out;
}

}  // namespace instructkit

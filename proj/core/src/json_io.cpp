#include "powers/json_io.hpp"

#include "powers/errors.hpp"

namespace powers {

using nlohmann::json;

json descriptor_to_json(const GroupDescriptor& desc) {
  switch (desc.kind()) {
    case GroupKind::free_group:
      return json{{"kind", "free"}, {"rank", desc.rank()}};
    case GroupKind::free_abelian:
      return json{{"kind", "free_abelian"}, {"rank", desc.rank()}};
    case GroupKind::direct_product:
      return json{{"kind", "direct_product"},
                  {"left", descriptor_to_json(desc.left())},
                  {"right", descriptor_to_json(desc.right())}};
  }
  throw Error("unreachable");
}

GroupDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("group descriptor must be an object with 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "free") return GroupDescriptor::free_group(j.at("rank").get<int>());
  if (kind == "free_abelian") return GroupDescriptor::free_abelian(j.at("rank").get<int>());
  if (kind == "direct_product")
    return GroupDescriptor::direct_product(descriptor_from_json(j.at("left")),
                                           descriptor_from_json(j.at("right")));
  throw ParseError("unknown group kind: '" + kind + "'");
}

namespace {

json coeff_to_json(const Scalar& c) {
  if (c.mode() == ScalarMode::exact) {
    if (c.is_real()) return format_rational(c.re());
    return json{{"re", format_rational(c.re())}, {"im", format_rational(c.im())}};
  }
  std::complex<double> v = c.value();
  if (v.imag() == 0.0) return v.real();
  return json{{"re", v.real()}, {"im", v.imag()}};
}

Scalar coeff_from_json(const json& j, ScalarMode mode) {
  if (j.is_string()) {
    Rational r = parse_rational(j.get<std::string>());
    if (mode != ScalarMode::exact) throw ParseError("rational coefficient in a float-mode element");
    return Scalar::exact(r);
  }
  if (j.is_number()) {
    double v = j.get<double>();
    return mode == ScalarMode::exact ? Scalar::exact(rational_from_double(v)) : Scalar::floating(v);
  }
  if (j.is_object() && j.contains("re") && j.contains("im")) {
    if (j.at("re").is_string()) {
      Scalar s = Scalar::exact(parse_rational(j.at("re").get<std::string>()),
                               parse_rational(j.at("im").get<std::string>()));
      return mode == ScalarMode::exact ? s : s.to_float();
    }
    Scalar s = Scalar::floating(j.at("re").get<double>(), j.at("im").get<double>());
    return mode == ScalarMode::exact ? s.to_exact() : s;
  }
  throw ParseError("bad coefficient: " + j.dump());
}

}  // namespace

json element_to_json(const AlgebraElement& a) {
  json terms = json::array();
  for (const auto& [w, c] : a.terms()) {
    terms.push_back(json{{"word", to_text(w)}, {"coeff", coeff_to_json(c)}});
  }
  return json{{"group", descriptor_to_json(a.descriptor())},
              {"mode", a.mode() == ScalarMode::exact ? "exact" : "float"},
              {"terms", std::move(terms)}};
}

AlgebraElement element_from_json(const json& j) {
  GroupDescriptor desc = descriptor_from_json(j.at("group"));
  std::string mode_text = j.value("mode", "exact");
  ScalarMode mode;
  if (mode_text == "exact") {
    mode = ScalarMode::exact;
  } else if (mode_text == "float") {
    mode = ScalarMode::floating;
  } else {
    throw ParseError("unknown mode: '" + mode_text + "'");
  }
  AlgebraElement out(desc, mode);
  for (const json& term : j.at("terms")) {
    Word w = parse_word(term.at("word").get<std::string>(), desc);
    out.accumulate(w, coeff_from_json(term.at("coeff"), mode));
  }
  return out;
}

json bound_config_to_json(const BoundConfig& cfg) {
  return json{{"radius", cfg.radius},
              {"max_iterations", cfg.max_iterations},
              {"moment_depth", cfg.moment_depth},
              {"power_depth", cfg.power_depth},
              {"seed", cfg.seed},
              {"tolerance", cfg.tolerance},
              {"support_cap", cfg.support_cap}};
}

BoundConfig bound_config_from_json(const json& j) {
  BoundConfig cfg;
  cfg.radius = j.value("radius", cfg.radius);
  cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
  cfg.moment_depth = j.value("moment_depth", cfg.moment_depth);
  cfg.power_depth = j.value("power_depth", cfg.power_depth);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.support_cap = j.value("support_cap", cfg.support_cap);
  return cfg;
}

json estimate_to_json(const NormEstimate& est) {
  return json{{"lower", est.lower},
              {"upper", est.upper},
              {"lower_method", est.lower_method},
              {"upper_method", est.upper_method},
              {"radius", est.radius},
              {"iterations", est.iterations},
              {"moment_depth", est.moment_depth},
              {"power_depth", est.power_depth},
              {"degraded", est.degraded}};
}

json search_config_to_json(const SearchConfig& cfg) {
  json seeds = json::array();
  for (const Word& w : cfg.seeds) seeds.push_back(to_text(w));
  return json{{"strategy", to_string(cfg.strategy)},
              {"max_conjugators", cfg.max_conjugators},
              {"max_candidate_length", cfg.max_candidate_length},
              {"fw_iterations", cfg.fw_iterations},
              {"epsilon", format_rational(cfg.epsilon)},
              {"seed", cfg.seed},
              {"bounds", bound_config_to_json(cfg.bounds)},
              {"seeds", std::move(seeds)}};
}

json certificate_to_json(const Certificate& cert) {
  json targets = json::array(), conjugators = json::array(), weights = json::array(), uppers = json::array();
  for (const Word& t : cert.targets) targets.push_back(to_text(t));
  for (const Word& s : cert.conjugators) conjugators.push_back(to_text(s));
  for (const Rational& w : cert.weights) weights.push_back(format_rational(w));
  for (const Rational& u : cert.target_upper_bounds) uppers.push_back(format_rational(u));
  return json{{"schema", kCertificateSchema},
              {"group", descriptor_to_json(cert.descriptor)},
              {"targets", std::move(targets)},
              {"conjugators", std::move(conjugators)},
              {"weights", std::move(weights)},
              {"target_upper_bounds", std::move(uppers)},
              {"epsilon", format_rational(cert.epsilon)},
              {"bound_config", bound_config_to_json(cert.bounds)}};
}

Certificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw MalformedCertificate("certificate must be a JSON object");
  if (j.value("schema", "") != kCertificateSchema)
    throw MalformedCertificate("unsupported certificate schema: '" + j.value("schema", "") + "'");
  Certificate cert{descriptor_from_json(j.at("group")), {}, {}, {}, {}, Rational(0), BoundConfig{}};
  for (const json& t : j.at("targets")) cert.targets.push_back(parse_word(t.get<std::string>(), cert.descriptor));
  for (const json& s : j.at("conjugators"))
    cert.conjugators.push_back(parse_word(s.get<std::string>(), cert.descriptor));
  for (const json& w : j.at("weights")) cert.weights.push_back(parse_rational(w.get<std::string>()));
  for (const json& u : j.at("target_upper_bounds"))
    cert.target_upper_bounds.push_back(parse_rational(u.get<std::string>()));
  cert.epsilon = parse_rational(j.at("epsilon").get<std::string>());
  cert.bounds = bound_config_from_json(j.at("bound_config"));
  return cert;
}

json dixmier_report_to_json(const DixmierReport& report) {
  json steps = json::array();
  for (const DixmierStep& s : report.steps) {
    steps.push_back(json{{"conjugator", to_text(s.conjugator)}, {"distance", estimate_to_json(s.distance)}});
  }
  return json{{"success", report.success},
              {"trace", format_rational(report.trace_value)},
              {"steps", std::move(steps)},
              {"final_element", element_to_json(report.final_element)}};
}

}  // namespace powers

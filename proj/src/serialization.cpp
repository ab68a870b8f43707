#include "repwalk/serialization.hpp"

#include <cstdio>

#include "repwalk/errors.hpp"

namespace repwalk {
namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  } catch (const DomainError& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const PairPotential& potential) {
  if (potential.is_power_law()) {
    return Json{{"type", "power_law"}, {"gamma", potential.power().gamma}, {"xi", potential.power().xi}};
  }
  const auto& t = potential.table();
  Json coeffs = Json::array();
  for (const auto& [key, c] : t.coeffs) coeffs.push_back(Json{{"i", key.first}, {"t", key.second}, {"c", c}});
  Json j{{"type", "coefficient_table"}, {"q", t.q}, {"coefficients", coeffs}};
  if (potential.has_negative_coefficients()) j["allow_signed"] = true;
  return j;
}

PairPotential potential_from_json(const Json& j) {
  return guarded("potential", [&] {
    const auto type = j.at("type").get<std::string>();
    if (type == "power_law") return PairPotential::power_law(j.at("gamma").get<int>(), j.at("xi").get<double>());
    if (type == "nearest_quadratic") return PairPotential::nearest_quadratic(get_or(j, "c", 1.0));
    if (type == "coefficient_table") {
      CoefficientTable t;
      t.q = j.at("q").get<int>();
      for (const auto& e : j.at("coefficients")) {
        const int i = e.at("i").get<int>();
        const int lag = e.at("t").get<int>();
        if (t.coeffs.count({i, lag})) throw ValidationError("duplicate coefficient entry");
        t.coeffs[{i, lag}] = e.at("c").get<double>();
      }
      return PairPotential::coefficient_table(std::move(t), get_or(j, "allow_signed", false));
    }
    throw ValidationError("unknown potential type '" + type + "'");
  });
}

Json to_json(const GibbsSpec& spec) {
  Json j{{"d", spec.dimension},
         {"T", spec.horizon},
         {"a", spec.amplitude},
         {"alpha", spec.alpha},
         {"potential", to_json(spec.potential)}};
  if (spec.interaction_set) {
    Json pairs = Json::array();
    for (const auto& p : *spec.interaction_set) pairs.push_back(Json::array({p.i, p.j}));
    j["interaction_set"] = pairs;
  }
  if (!spec.window_terms.empty()) {
    Json w = Json::array();
    for (const auto& t : spec.window_terms)
      w.push_back(Json{{"i", t.i}, {"j", t.j}, {"weight", t.weight}, {"power", t.power}});
    j["window_terms"] = w;
  }
  return j;
}

GibbsSpec spec_from_json(const Json& j) {
  return guarded("spec", [&] {
    GibbsSpec spec;
    spec.dimension = get_or(j, "d", 1);
    spec.horizon = j.at("T").get<int>();
    spec.amplitude = get_or(j, "a", 1.0);
    spec.alpha = j.at("alpha").get<double>();
    if (j.contains("potential")) spec.potential = potential_from_json(j.at("potential"));
    if (j.contains("interaction_set")) {
      std::vector<PairIndex> pairs;
      for (const auto& p : j.at("interaction_set")) pairs.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
      spec.interaction_set = std::move(pairs);
    }
    if (j.contains("window_terms")) {
      for (const auto& w : j.at("window_terms"))
        spec.window_terms.push_back(
            {w.at("i").get<int>(), w.at("j").get<int>(), w.at("weight").get<double>(), get_or(w, "power", 2)});
    }
    spec.validate();
    return spec;
  });
}

Json to_json(const Observable& obs) {
  if (std::holds_alternative<EndpointSquare>(obs)) return Json{{"kind", "endpoint_square"}};
  if (const auto* e = std::get_if<EndpointCoordinate>(&obs)) return Json{{"kind", "endpoint_coordinate"}, {"coord", e->coord}};
  if (const auto* m = std::get_if<Monomial>(&obs)) {
    Json f = Json::array();
    for (const auto& x : m->factors) f.push_back(Json::array({x.step, x.coord, x.exponent}));
    return Json{{"kind", "monomial"}, {"factors", f}};
  }
  if (const auto* p = std::get_if<PairEqualIndicator>(&obs))
    return Json{{"kind", "pair_equal"}, {"i", p->i}, {"j", p->j}, {"coord", p->coord}};
  if (const auto* w = std::get_if<WindowAllEqualIndicator>(&obs))
    return Json{{"kind", "window_all_equal"}, {"first", w->first}, {"last", w->last}, {"coord", w->coord}};
  const auto& b = std::get<BlockProduct>(obs);
  return Json{{"kind", "block_product"}, {"a", Json::array({b.a_first, b.a_last})},
              {"b", Json::array({b.b_first, b.b_last})}, {"coord", b.coord},
              {"a_scale", b.a_scale}, {"b_scale", b.b_scale}};
}

Observable observable_from_json(const Json& j, int horizon) {
  return guarded("observable", [&]() -> Observable {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "endpoint_square") return EndpointSquare{};
    if (kind == "endpoint_coordinate") return EndpointCoordinate{get_or(j, "coord", 0)};
    if (kind == "monomial") {
      Monomial m;
      for (const auto& f : j.at("factors"))
        m.factors.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.size() > 2 ? f.at(2).get<int>() : 1});
      return m;
    }
    if (kind == "pair_equal") return PairEqualIndicator{j.at("i").get<int>(), j.at("j").get<int>(), get_or(j, "coord", 0)};
    if (kind == "window_all_equal")
      return WindowAllEqualIndicator{j.at("first").get<int>(), j.at("last").get<int>(), get_or(j, "coord", 0)};
    if (kind == "block_product")
      return BlockProduct{j.at("a").at(0).get<int>(), j.at("a").at(1).get<int>(), j.at("b").at(0).get<int>(),
                          j.at("b").at(1).get<int>(), get_or(j, "coord", 0), get_or(j, "a_scale", 1.0),
                          get_or(j, "b_scale", 1.0)};
    if (kind == "half_block_product") return half_block_product(horizon);
    throw ValidationError("unknown observable kind '" + kind + "'");
  });
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string spec_hash(const GibbsSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json(spec).dump())));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace repwalk

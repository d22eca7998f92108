#include "ldmp/lqt/serialization.hpp"

#include <stdexcept>

namespace ldmp::lqt {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const json& doc) {
  if (!doc.is_array()) throw std::invalid_argument("expected a numeric array");
  Vec v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) v[static_cast<Eigen::Index>(i)] = doc[i].get<double>();
  return v;
}

namespace {

json mat_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

Mat mat_from_json(const json& doc, Eigen::Index rows, Eigen::Index cols) {
  if (!doc.is_array() || doc.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("matrix payload has wrong size");
  }
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = doc[r * cols + c].get<double>();
  return m;
}

}  // namespace

json to_json(const ReferenceTrajectory& ref) {
  json steps = json::array();
  for (const auto& s : ref.steps) {
    steps.push_back({{"p", vec_to_json(s.position)},
                     {"v", vec_to_json(s.velocity)},
                     {"a", vec_to_json(s.acceleration)}});
  }
  json doc = {{"dt", ref.dt}, {"goal", vec_to_json(ref.goal)}, {"steps", std::move(steps)}};
  if (!ref.via.empty()) {
    json via = json::array();
    for (const auto& v : ref.via) {
      via.push_back({{"step", v.step}, {"p", vec_to_json(v.position)}, {"precision", v.precision}});
    }
    doc["via"] = std::move(via);
  }
  return doc;
}

ReferenceTrajectory reference_from_json(const json& doc) {
  ReferenceTrajectory ref;
  ref.dt = doc.at("dt").get<double>();
  ref.goal = vec_from_json(doc.at("goal"));
  for (const auto& s : doc.at("steps")) {
    ref.steps.push_back({vec_from_json(s.at("p")), vec_from_json(s.at("v")), vec_from_json(s.at("a"))});
  }
  if (ref.steps.size() < 2) throw std::invalid_argument("reference needs at least 2 steps");
  for (const auto& s : ref.steps) {
    if (s.position.size() != ref.goal.size() || s.velocity.size() != ref.goal.size() ||
        s.acceleration.size() != ref.goal.size()) {
      throw std::invalid_argument("reference sample dimension mismatch");
    }
  }
  if (doc.contains("via")) {
    for (const auto& v : doc.at("via")) {
      ref.via.push_back({v.at("step").get<int>(), vec_from_json(v.at("p")),
                         v.value("precision", 1e4)});
    }
  }
  return ref;
}

json to_json(const ControlPrimitiveController& controller, const BasisFamily& basis, double dt) {
  json gains = json::array();
  for (const auto& k : controller.gains) gains.push_back(mat_to_json(k));
  return {{"K", basis.count},
          {"dim", controller.dim},
          {"steps", controller.horizon},
          {"dt", dt},
          {"centers", vec_to_json(basis.centers)},
          {"bandwidth", basis.bandwidth},
          {"W", mat_to_json(controller.W)},
          {"gains", std::move(gains)}};
}

StoredController controller_from_json(const json& doc) {
  StoredController out;
  const int K = doc.at("K").get<int>();
  const int d = doc.at("dim").get<int>();
  const int T = doc.at("steps").get<int>();
  out.dt = doc.at("dt").get<double>();
  out.basis = make_rbf_basis(K, d, T, doc.at("bandwidth").get<double>());
  out.controller.dim = d;
  out.controller.horizon = T;
  out.controller.W = mat_from_json(doc.at("W"), K * d, 3 * d + 1);
  for (const auto& g : doc.at("gains")) out.controller.gains.push_back(mat_from_json(g, d, 3 * d + 1));
  if (!out.controller.gains.empty() && static_cast<int>(out.controller.gains.size()) != T) {
    throw std::invalid_argument("controller gain schedule length mismatch");
  }
  return out;
}

}  // namespace ldmp::lqt

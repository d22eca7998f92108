#pragma once

#include "json.hpp"
#include "ldmp/lqt/basis.hpp"
#include "ldmp/lqt/controller.hpp"
#include "ldmp/lqt/reference.hpp"

namespace ldmp::lqt {

nlohmann::json to_json(const ReferenceTrajectory& ref);
ReferenceTrajectory reference_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ControlPrimitiveController& controller, const BasisFamily& basis,
                       double dt);

struct StoredController {
  BasisFamily basis;
  ControlPrimitiveController controller;
  double dt = 0.01;
};
StoredController controller_from_json(const nlohmann::json& doc);

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& doc);

}  // namespace ldmp::lqt

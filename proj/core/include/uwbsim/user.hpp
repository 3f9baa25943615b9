#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "uwbsim/mcs.hpp"

namespace uwbsim {

using UserId = std::uint32_t;

enum class QosClass { Hard, Soft };

std::string to_string(QosClass c);
QosClass parse_qos_class(std::string_view text);

/// One device with traffic to send. `weight` is the resolved MAC priority q;
/// `weight_override` feeds resolve_weights() when set.
struct UserProfile {
  UserId id = 0;
  QosClass qos = QosClass::Soft;
  double weight = 0.0;
  McsConfig mcs;
  std::optional<double> weight_override;
};

}  // namespace uwbsim

#pragma once

#include <string>
#include <vector>

#include "pecert/bellmodel.hpp"

namespace pecert {

// Settings-conditional distributions inferred from three published Bell-test
// experiments, embedded at full printed precision: "atoms" (heralded
// entanglement between single atoms), "xor3" (loophole-free photonic run,
// tiny violation), "ions" (trapped-ion pair). Throws on unknown names.
ConditionalDistribution embedded_dataset(const std::string& name);

const std::vector<std::string>& embedded_dataset_names();

}  // namespace pecert

#include "pecert/datasets.hpp"

#include <stdexcept>

namespace pecert {

namespace {

// Rows z = x+2y over (00,10,01,11), columns c = a+2b likewise.
constexpr double kAtoms[kCells] = {
    0.114583230563265, 0.408949785618886, 0.369310344143205, 0.107156639674644,
    0.399140705802719, 0.124392310379432, 0.111262723543957, 0.365204260273892,
    0.102208313465938, 0.403210760398438, 0.381685261240533, 0.112895664895092,
    0.127756153189431, 0.377662920674945, 0.382647276157245, 0.111933649978380,
};

constexpr double kXor3[kCells] = {
    0.999596756631154, 0.000106695746779, 0.000100495174505, 0.000196052447562,
    0.999039892488787, 0.000663559889146, 0.000086780398739, 0.000209767223328,
    0.998967962694884, 0.000089505202208, 0.000729289110776, 0.000213242992132,
    0.998187653168081, 0.000869814729010, 0.000939019719445, 0.000003512383464,
};

// Stored with the station labeling that satisfies non-signaling: the source
// tabulates the two mixed-settings rows in the opposite station order.
constexpr double kIons[kCells] = {
    0.395306466091468, 0.117610486235535, 0.093816274721118, 0.393266772951878,
    0.411397337408393, 0.101519614918611, 0.097960367844259, 0.389122679828738,
    0.385009648861242, 0.101263041214040, 0.104113091951344, 0.409614217973373,
    0.077378395334667, 0.408894294740616, 0.431979309917985, 0.081748000006733,
};

ConditionalDistribution from_table(const double (&t)[kCells]) {
  ConditionalDistribution c;
  for (int e = 0; e < kCells; ++e) c.p[e] = t[e];
  return c;
}

}  // namespace

ConditionalDistribution embedded_dataset(const std::string& name) {
  if (name == "atoms") return from_table(kAtoms);
  if (name == "xor3") return from_table(kXor3);
  if (name == "ions") return from_table(kIons);
  throw std::invalid_argument("embedded_dataset: unknown name '" + name + "'");
}

const std::vector<std::string>& embedded_dataset_names() {
  static const std::vector<std::string> names = {"atoms", "xor3", "ions"};
  return names;
}

}  // namespace pecert

#include "registry.hpp"

namespace carlo {

const std::vector<ExperimentDef>& experiment_registry() {
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> d;
    registry::add_ch2(d);
    registry::add_ch3(d);
    registry::add_ch4(d);
    registry::add_ch5(d);
    registry::add_ch6(d);
    registry::add_ch7(d);
    registry::add_ch8(d);
    return d;
  }();
  return defs;
}

}  // namespace carlo

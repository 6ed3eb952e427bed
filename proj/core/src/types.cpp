#include "sdt/types.hpp"

namespace sdt {

void Trajectory::validate() const {
  if (times.size() != states.size()) throw std::invalid_argument("trajectory: times/states size mismatch");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("trajectory: timestamps must be strictly increasing");
  }
  if (!states.empty()) {
    const auto d = states.front().size();
    for (const auto& s : states) {
      if (s.size() != d) throw std::invalid_argument("trajectory: mixed state dimensions");
    }
  }
}

}  // namespace sdt

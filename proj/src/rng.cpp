#include "satdtn/rng.hpp"

#include <stdexcept>

namespace satdtn {

bool sample_loss(SplitMix64& stream, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("sample_loss: probability must be in [0, 1]");
    return stream.next_double() < p;
}

} // namespace satdtn

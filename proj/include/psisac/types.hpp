#ifndef PSISAC_TYPES_HPP
#define PSISAC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <vector>

namespace psisac {

using cpx = std::complex<double>;
using cvec = std::vector<cpx>;

/// Thrown when a configuration or a cross-argument contract is violated.
/// The message names the violated invariant.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace psisac

#endif

#include "pnp/simulation.hpp"

#include <algorithm>
#include <sstream>

#include "pnp/errors.hpp"

namespace pnp {

double resolve_time_step(std::optional<double> requested, CflPolicy policy, double safety,
                         double bound) {
    if (requested && !(*requested > 0.0)) throw Error("time step must be positive");
    if (!(safety > 0.0)) throw Error("CFL safety factor must be positive");
    switch (policy) {
        case CflPolicy::Auto:
            return requested ? std::min(*requested, safety * bound) : safety * bound;
        case CflPolicy::Warn:
            return requested ? *requested : safety * bound;
        case CflPolicy::Strict:
            if (!requested) return safety * bound;
            if (*requested > bound) {
                std::ostringstream os;
                os.precision(17);
                os << "time step k = " << *requested
                   << " exceeds the positivity bound h^2*lambda = " << bound;
                throw CflViolationError(os.str(), *requested, bound);
            }
            return *requested;
    }
    return safety * bound;
}

}  // namespace pnp

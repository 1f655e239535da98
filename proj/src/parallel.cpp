#include "metallic/parallel.hpp"

#include <omp.h>

namespace mk::par {

int max_threads() { return omp_get_max_threads(); }

}  // namespace mk::par

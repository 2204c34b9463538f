#include "corrugate/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

#include "corrugate/errors.hpp"

namespace corrugate {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain_error";
    case ErrorKind::Precondition: return "precondition_violation";
    case ErrorKind::FrameDegeneracy: return "frame_degeneracy";
    case ErrorKind::StepFailure: return "step_failure";
    case ErrorKind::Preprocessing: return "preprocessing_error";
    case ErrorKind::IsotopyUncertified: return "isotopy_uncertified";
    case ErrorKind::Io: return "io_error";
    case ErrorKind::Config: return "config_error";
  }
  return "error";
}

int configure_threads_from_env() {
  if (const char* env = std::getenv("CORRUGATE_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested > 0) omp_set_num_threads(requested);
    } catch (const std::exception&) {
      throw ConfigError(std::string("CORRUGATE_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace corrugate

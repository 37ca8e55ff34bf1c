#include <ymddr/runtime.hpp>
#include <ymddr/solver.hpp>

#include <cstdlib>
#include <unistd.h>
#include <vector>

namespace ymddr
{

  void select_reliable_blas(int argc, char ** argv)
  {
    if (std::getenv("OPENBLAS_CORETYPE") != nullptr || supernodal_cholesky_available()) {
      return;
    }
    if (::setenv("OPENBLAS_CORETYPE", "Haswell", 1) != 0) {
      return;
    }
    std::vector<char *> args(argv, argv + argc);
    args.push_back(nullptr);
    ::execv("/proc/self/exe", args.data());
    // exec failed: carry on with the simplicial fallback
  }

} // namespace ymddr

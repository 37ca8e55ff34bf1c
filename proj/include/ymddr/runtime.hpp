// Process-level setup shared by the executables.

#ifndef YMDDR_RUNTIME_HPP
#define YMDDR_RUNTIME_HPP

namespace ymddr
{

  /// When the supernodal Cholesky self-check fails and OPENBLAS_CORETYPE is unset, restart
  /// the current process with a conservative OpenBLAS kernel. Returns only when no restart
  /// was needed or possible.
  void select_reliable_blas(int argc, char ** argv);

} // namespace ymddr

#endif

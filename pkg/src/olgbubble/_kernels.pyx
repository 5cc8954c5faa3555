# Float64 forward-shooting kernels for log-savings economies.
#
# tech 0: f(k) = A k^alpha + (1 - par) k       (Cobb-Douglas, par = delta)
# tech 1: f(k) = A k^alpha + par k log(1+1/k)  (par = theta)
# Status codes: 0 completed, 1 fail_low, 2 fail_high.
from libc.math cimport pow, log1p, isfinite


cdef inline double _wage(int tech, double A, double alpha, double par, double k) noexcept nogil:
    if tech == 0:
        return A * (1.0 - alpha) * pow(k, alpha)
    return A * (1.0 - alpha) * pow(k, alpha) + par * k / (1.0 + k)


cdef inline double _fprime(int tech, double A, double alpha, double par, double k) noexcept nogil:
    if tech == 0:
        return A * alpha * pow(k, alpha - 1.0) + (1.0 - par)
    return A * alpha * pow(k, alpha - 1.0) + par * (log1p(1.0 / k) - 1.0 / (1.0 + k))


cdef inline int _run(int tech, double A, double alpha, double par, double beta, double G,
                     double k0, double p0, const double[:] d, int T, double low_tol,
                     double* k_out, double* p_out, int* t_end) noexcept nogil:
    cdef double k = k0, p = p0, x, pn
    cdef int t
    if k_out != NULL:
        k_out[0] = k
        p_out[0] = p
    for t in range(T):
        x = (beta * _wage(tech, A, alpha, par, k) - p) / G
        if not (x > 0.0):
            t_end[0] = t
            return 2
        pn = _fprime(tech, A, alpha, par, x) / G * p - d[t + 1]
        if pn < -low_tol or not isfinite(pn):
            t_end[0] = t
            return 1 if pn < -low_tol else 2
        k = x
        p = pn
        if k_out != NULL:
            k_out[t + 1] = k
            p_out[t + 1] = p
    t_end[0] = T
    return 0


def shoot(int tech, double A, double alpha, double par, double beta, double G,
          double k0, double p0, const double[:] d, int T,
          double[:] k_out, double[:] p_out, double low_tol=1e-12):
    """Forward-simulate one path; returns ``(status, last_valid_index)``."""
    cdef int t_end = 0, status
    if d.shape[0] < T + 1 or k_out.shape[0] < T + 1 or p_out.shape[0] < T + 1:
        raise ValueError("arrays must hold T + 1 entries")
    with nogil:
        status = _run(tech, A, alpha, par, beta, G, k0, p0, d, T, low_tol,
                      &k_out[0], &p_out[0], &t_end)
    return status, t_end


def survival(int tech, double A, double alpha, double par, double beta, double G,
             double k0, const double[:] p0s, const double[:] d, int T,
             int[:] status_out, int[:] tend_out, double low_tol=1e-12):
    """Termination status of many initial prices (no paths stored)."""
    cdef Py_ssize_t i, n = p0s.shape[0]
    cdef int t_end = 0
    if d.shape[0] < T + 1:
        raise ValueError("dividend array must hold T + 1 entries")
    with nogil:
        for i in range(n):
            status_out[i] = _run(tech, A, alpha, par, beta, G, k0, p0s[i], d, T, low_tol,
                                 NULL, NULL, &t_end)
            tend_out[i] = t_end

# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled cart-pendulum kernels (hot inner loops of the simulator).

Twin of ``_kernels_py``; the arithmetic mirrors the pure-Python version
expression for expression so both backends agree to rounding.
"""

from libc.math cimport cos, sin, tanh

BACKEND_NAME = "compiled"


cdef inline void _accel(double x, double theta, double x_dot, double theta_dot,
                        double force,
                        double mc, double mp, double lp, double ip,
                        double grav, double cx, double cth,
                        double* xdd, double* thdd) noexcept:
    cdef double co = cos(theta)
    cdef double si = sin(theta)
    cdef double a11 = mc + mp
    cdef double a12 = -mp * lp * co
    cdef double a22 = ip + mp * lp * lp
    cdef double b1 = force - (mp * lp * theta_dot * theta_dot * si + cx * tanh(x_dot))
    cdef double b2 = mp * grav * lp * si - cth * tanh(theta_dot)
    cdef double det = a11 * a22 - a12 * a12
    xdd[0] = (a22 * b1 - a12 * b2) / det
    thdd[0] = (a11 * b2 - a12 * b1) / det


def pendulum_accel(double x, double theta, double x_dot, double theta_dot,
                   double force, double mc, double mp, double lp, double ip,
                   double grav, double cx, double cth):
    """Accelerations (xdd, thdd) of the cart-pendulum under ``force``."""
    cdef double xdd, thdd
    _accel(x, theta, x_dot, theta_dot, force, mc, mp, lp, ip, grav, cx, cth,
           &xdd, &thdd)
    return xdd, thdd


cdef inline void _rk4_step(double* x, double* theta, double* x_dot,
                           double* theta_dot, double force, double dt,
                           double mc, double mp, double lp, double ip,
                           double grav, double cx, double cth) noexcept:
    cdef double k1x, k1t, k1xd, k1td
    cdef double k2x, k2t, k2xd, k2td
    cdef double k3x, k3t, k3xd, k3td
    cdef double k4x, k4t, k4xd, k4td
    cdef double h2 = 0.5 * dt
    cdef double h6 = dt / 6.0

    k1x = x_dot[0]
    k1t = theta_dot[0]
    _accel(x[0], theta[0], x_dot[0], theta_dot[0], force,
           mc, mp, lp, ip, grav, cx, cth, &k1xd, &k1td)

    k2x = x_dot[0] + h2 * k1xd
    k2t = theta_dot[0] + h2 * k1td
    _accel(x[0] + h2 * k1x, theta[0] + h2 * k1t,
           x_dot[0] + h2 * k1xd, theta_dot[0] + h2 * k1td,
           force, mc, mp, lp, ip, grav, cx, cth, &k2xd, &k2td)

    k3x = x_dot[0] + h2 * k2xd
    k3t = theta_dot[0] + h2 * k2td
    _accel(x[0] + h2 * k2x, theta[0] + h2 * k2t,
           x_dot[0] + h2 * k2xd, theta_dot[0] + h2 * k2td,
           force, mc, mp, lp, ip, grav, cx, cth, &k3xd, &k3td)

    k4x = x_dot[0] + dt * k3xd
    k4t = theta_dot[0] + dt * k3td
    _accel(x[0] + dt * k3x, theta[0] + dt * k3t,
           x_dot[0] + dt * k3xd, theta_dot[0] + dt * k3td,
           force, mc, mp, lp, ip, grav, cx, cth, &k4xd, &k4td)

    x[0] = x[0] + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    theta[0] = theta[0] + h6 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
    x_dot[0] = x_dot[0] + h6 * (k1xd + 2.0 * k2xd + 2.0 * k3xd + k4xd)
    theta_dot[0] = theta_dot[0] + h6 * (k1td + 2.0 * k2td + 2.0 * k3td + k4td)


def rk4_step(double x, double theta, double x_dot, double theta_dot,
             double force, double dt,
             double mc, double mp, double lp, double ip,
             double grav, double cx, double cth):
    """One classical RK4 step with the force held constant."""
    _rk4_step(&x, &theta, &x_dot, &theta_dot, force, dt,
              mc, mp, lp, ip, grav, cx, cth)
    return x, theta, x_dot, theta_dot


def rk4_advance(double x, double theta, double x_dot, double theta_dot,
                double force, double dt, int substeps,
                double mc, double mp, double lp, double ip,
                double grav, double cx, double cth):
    """Advance by ``dt`` using ``substeps`` RK4 steps, zero-order-hold force."""
    cdef double h = dt / substeps
    cdef int i
    for i in range(substeps):
        _rk4_step(&x, &theta, &x_dot, &theta_dot, force, h,
                  mc, mp, lp, ip, grav, cx, cth)
    return x, theta, x_dot, theta_dot


cdef inline double _ref_force(double x, double x_dot, double theta_dot,
                              double cx, double cth) noexcept:
    return -cx * x_dot - 0.5 * cth * theta_dot - 0.1 * cx * x


def reference_force(double x, double x_dot, double theta_dot,
                    double cx, double cth):
    """Weak state feedback used to generate the reference swing."""
    return _ref_force(x, x_dot, theta_dot, cx, cth)


cdef inline void _feedback_deriv(double x, double theta, double x_dot,
                                 double theta_dot,
                                 double mc, double mp, double lp, double ip,
                                 double grav, double cx, double cth,
                                 double* dx, double* dt_, double* dxd,
                                 double* dtd) noexcept:
    cdef double force = _ref_force(x, x_dot, theta_dot, cx, cth)
    dx[0] = x_dot
    dt_[0] = theta_dot
    _accel(x, theta, x_dot, theta_dot, force, mc, mp, lp, ip, grav, cx, cth,
           dxd, dtd)


def trajgen_advance(double x, double theta, double x_dot, double theta_dot,
                    double dt, int substeps,
                    double mc, double mp, double lp, double ip,
                    double grav, double cx, double cth):
    """Advance the reference-generating closed loop by ``dt``.

    The force is re-evaluated from the state at every RK4 stage
    (continuous feedback, no hold).
    """
    cdef double h = dt / substeps
    cdef double h2 = 0.5 * h
    cdef double h6 = h / 6.0
    cdef double k1x, k1t, k1xd, k1td
    cdef double k2x, k2t, k2xd, k2td
    cdef double k3x, k3t, k3xd, k3td
    cdef double k4x, k4t, k4xd, k4td
    cdef int i
    for i in range(substeps):
        _feedback_deriv(x, theta, x_dot, theta_dot,
                        mc, mp, lp, ip, grav, cx, cth,
                        &k1x, &k1t, &k1xd, &k1td)
        _feedback_deriv(x + h2 * k1x, theta + h2 * k1t,
                        x_dot + h2 * k1xd, theta_dot + h2 * k1td,
                        mc, mp, lp, ip, grav, cx, cth,
                        &k2x, &k2t, &k2xd, &k2td)
        _feedback_deriv(x + h2 * k2x, theta + h2 * k2t,
                        x_dot + h2 * k2xd, theta_dot + h2 * k2td,
                        mc, mp, lp, ip, grav, cx, cth,
                        &k3x, &k3t, &k3xd, &k3td)
        _feedback_deriv(x + h * k3x, theta + h * k3t,
                        x_dot + h * k3xd, theta_dot + h * k3td,
                        mc, mp, lp, ip, grav, cx, cth,
                        &k4x, &k4t, &k4xd, &k4td)
        x = x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        theta = theta + h6 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        x_dot = x_dot + h6 * (k1xd + 2.0 * k2xd + 2.0 * k3xd + k4xd)
        theta_dot = theta_dot + h6 * (k1td + 2.0 * k2td + 2.0 * k3td + k4td)
    return x, theta, x_dot, theta_dot

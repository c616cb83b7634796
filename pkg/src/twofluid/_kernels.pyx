# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled interface-flux and implicit-source kernels.

Both entry points work on flat C-contiguous batches and follow the numpy
reference implementation operation by operation, so the two backends agree
to roundoff. Errors are reported through return codes because the loops run
without the GIL.
"""

import numpy as np

from cython.parallel cimport parallel, prange
from libc.math cimport fabs, log, sqrt
from libc.stdlib cimport free, malloc

cdef enum:
    NV = 18

cdef double LOG_MEAN_SWITCH = 1e-2


cdef inline double log_mean(double a, double b) noexcept nogil:
    cdef double zeta, f
    if fabs(b - a) < LOG_MEAN_SWITCH * a:
        zeta = (b - a) / (b + a)
        f = zeta * zeta
        return (a + b) / (2.0 * (1.0 + f * (1.0 / 3.0 + f * (1.0 / 5.0 + f * (1.0 / 7.0 + f / 9.0)))))
    return (b - a) / log(b / a)


cdef inline int to_prim(const double* u, double* q, double gamma) noexcept nogil:
    """Conservative to primitive; returns 1 for a non-positive density or pressure."""
    cdef int s, k
    cdef double rho, m2, p
    for k in range(10, NV):
        q[k] = u[k]
    for s in range(0, 10, 5):
        rho = u[s]
        if not rho > 0.0:
            return 1
        m2 = u[s + 1] * u[s + 1] + u[s + 2] * u[s + 2] + u[s + 3] * u[s + 3]
        p = (gamma - 1.0) * (u[s + 4] - 0.5 * m2 / rho)
        if not p > 0.0:
            return 1
        q[s] = rho
        for k in range(1, 4):
            q[s + k] = u[s + k] / rho
        q[s + 4] = p
    return 0


cdef inline void entropy_vars(const double* q, double* V, double gamma, double ic2) noexcept nogil:
    cdef int s, k
    cdef double beta, ent, v2
    for s in range(0, 10, 5):
        ent = log(q[s + 4]) - gamma * log(q[s])
        beta = q[s] / q[s + 4]
        v2 = q[s + 1] * q[s + 1] + q[s + 2] * q[s + 2] + q[s + 3] * q[s + 3]
        V[s] = (gamma - ent) / (gamma - 1.0) - 0.5 * beta * v2
        for k in range(1, 4):
            V[s + k] = beta * q[s + k]
        V[s + 4] = -beta
    for k in range(10, 13):
        V[k] = q[k]
    for k in range(13, 16):
        V[k] = q[k] * ic2
    V[16] = q[16]
    V[17] = q[17] * ic2


cdef inline void maxwell_flux(const double* u, double* f, int axis,
                              double c2, double xi, double ka) noexcept nogil:
    # u, f point at the 8 Maxwell slots
    if axis == 0:
        f[0] = ka * u[7]
        f[1] = -u[5]
        f[2] = u[4]
        f[3] = xi * c2 * u[6]
        f[4] = c2 * u[2]
        f[5] = -c2 * u[1]
        f[6] = xi * u[3]
        f[7] = ka * c2 * u[0]
    else:
        f[0] = u[5]
        f[1] = ka * u[7]
        f[2] = -u[3]
        f[3] = -c2 * u[2]
        f[4] = xi * c2 * u[6]
        f[5] = c2 * u[0]
        f[6] = xi * u[4]
        f[7] = ka * c2 * u[1]


cdef inline void ismail_roe(const double* ql, const double* qr, double* out,
                            int axis, double gamma) noexcept nogil:
    # ql, qr, out point at one species' (rho, v, p) / flux block
    cdef double zl[5]
    cdef double zr[5]
    cdef double zb[5]
    cdef double rl, rr, z1ln, z5ln, f1, acc
    cdef int k
    rl = sqrt(ql[0] / ql[4])
    rr = sqrt(qr[0] / qr[4])
    zl[0] = rl
    zr[0] = rr
    for k in range(1, 4):
        zl[k] = rl * ql[k]
        zr[k] = rr * qr[k]
    zl[4] = rl * ql[4]
    zr[4] = rr * qr[4]
    for k in range(5):
        zb[k] = 0.5 * (zl[k] + zr[k])
    z1ln = log_mean(zl[0], zr[0])
    z5ln = log_mean(zl[4], zr[4])
    f1 = zb[1 + axis] * z5ln
    out[0] = f1
    for k in range(1, 4):
        out[k] = (zb[k] / zb[0]) * f1
    out[1 + axis] += zb[4] / zb[0]
    acc = zb[1] * out[1] + zb[2] * out[2] + zb[3] * out[3]
    out[4] = ((gamma + 1.0) / (gamma - 1.0) * f1 / z1ln + acc) / (2.0 * zb[0])


cdef inline void fluid_R(const double* q, double* R, int axis, double gamma) noexcept nogil:
    """Scaled right eigenvectors of one species, row-major 5x5."""
    cdef double rho = q[0]
    cdef double p = q[4]
    cdef double a = sqrt(gamma * p / rho)
    cdef double vn = q[1 + axis]
    cdef double kin = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3])
    cdef double H = a * a / (gamma - 1.0) + kin
    cdef double sc[5]
    cdef int i, j, t1, t2
    for i in range(25):
        R[i] = 0.0
    if axis == 0:
        t1 = 1
        t2 = 2
    else:
        t1 = 0
        t2 = 2
    R[0 * 5 + 0] = 1.0
    R[0 * 5 + 1] = 1.0
    R[0 * 5 + 4] = 1.0
    for i in range(3):
        R[(1 + i) * 5 + 0] = q[1 + i]
        R[(1 + i) * 5 + 1] = q[1 + i]
        R[(1 + i) * 5 + 4] = q[1 + i]
    R[(1 + axis) * 5 + 0] -= a
    R[(1 + axis) * 5 + 4] += a
    R[4 * 5 + 0] = H - vn * a
    R[4 * 5 + 1] = kin
    R[(1 + t1) * 5 + 2] = 1.0
    R[4 * 5 + 2] = q[1 + t1]
    R[(1 + t2) * 5 + 3] = 1.0
    R[4 * 5 + 3] = q[1 + t2]
    R[4 * 5 + 4] = H + vn * a
    sc[0] = sqrt(rho / (2.0 * gamma))
    sc[1] = sqrt((gamma - 1.0) * rho / gamma)
    sc[2] = sqrt(p)
    sc[3] = sqrt(p)
    sc[4] = sc[0]
    for i in range(5):
        for j in range(5):
            R[i * 5 + j] *= sc[j]


cdef inline double phi_minmod(double num, double den) noexcept nogil:
    cdef double th
    if den == 0.0:
        return 0.0
    th = num / den
    if th < 0.0 or th != th:
        return 0.0
    if th > 1.0:
        return 1.0
    return th


cdef inline double limited(double dl, double d, double dr) noexcept nogil:
    cdef double fac = 1.0 - 0.5 * (phi_minmod(dl, d) + phi_minmod(dr, d))
    return fac * d


cdef int PAIRS[2][4][2]
PAIRS[0][0] = [1, 5]
PAIRS[0][1] = [2, 4]
PAIRS[0][2] = [3, 6]
PAIRS[0][3] = [0, 7]
PAIRS[1][0] = [0, 5]
PAIRS[1][1] = [2, 3]
PAIRS[1][2] = [4, 6]
PAIRS[1][3] = [1, 7]


cdef inline void interface_setup(
    const double* uL, const double* uR, const double* qL, const double* qR,
    const double* VL, const double* VR, double* R, double* lam, double* d,
    int axis, double gamma, double c2, double xi, double ka, const double* isw,
) noexcept nogil:
    """Eigenvectors (ion then electron, 25 each), block speeds and the scaled jump R^T [V]."""
    cdef double ua[NV]
    cdef double qa[NV]
    cdef double spl, spr, r, da, db
    cdef int s, k, i, sp, a, b

    for k in range(NV):
        ua[k] = 0.5 * (uL[k] + uR[k])
    to_prim(ua, qa, gamma)
    for sp in range(2):
        s = 5 * sp
        spl = fabs(qL[s + 1 + axis]) + sqrt(gamma * qL[s + 4] / qL[s])
        spr = fabs(qR[s + 1 + axis]) + sqrt(gamma * qR[s + 4] / qR[s])
        lam[sp] = spl if spl > spr else spr
    lam[2] = lam[0] if lam[0] > lam[1] else lam[1]
    spl = sqrt(c2) * (xi if xi > ka else ka)
    spl = spl if spl > sqrt(c2) else sqrt(c2)
    if spl > lam[2]:
        lam[2] = spl

    for sp in range(2):
        s = 5 * sp
        fluid_R(qa + s, R + 25 * sp, axis, gamma)
        for i in range(5):
            d[s + i] = 0.0
            for k in range(5):
                d[s + i] += R[25 * sp + k * 5 + i] * (VR[s + k] - VL[s + k])

    r = sqrt(0.5)
    for i in range(4):
        a = PAIRS[axis][i][0]
        b = PAIRS[axis][i][1]
        da = (VR[10 + a] - VL[10 + a]) * isw[a]
        db = (VR[10 + b] - VL[10 + b]) * isw[b]
        d[10 + 2 * i] = r * (da + db)
        d[11 + 2 * i] = r * (da - db)


cdef inline void interface_flux(
    const double* uL, const double* uR, const double* qL, const double* qR,
    const double* R, const double* lam, const double* dm, const double* d, const double* dp,
    double* out, int axis, int order, double gamma, double c2, double xi, double ka,
    const double* isw,
) noexcept nogil:
    """Entropy-stable flux between uL and uR.

    ``d`` is this interface's scaled jump, ``dm``/``dp`` those of the left and
    right neighbouring interfaces (used only for order 2).
    """
    cdef double fl[8]
    cdef double fr[8]
    cdef double Wt[NV]
    cdef double r, j0, j1
    cdef int s, k, i, sp, a, b

    for s in range(0, 10, 5):
        ismail_roe(qL + s, qR + s, out + s, axis, gamma)
    maxwell_flux(uL + 10, fl, axis, c2, xi, ka)
    maxwell_flux(uR + 10, fr, axis, c2, xi, ka)
    for k in range(8):
        out[10 + k] = 0.5 * (fl[k] + fr[k])

    for k in range(NV):
        Wt[k] = d[k] if order == 1 else limited(dm[k], d[k], dp[k])

    for sp in range(2):
        s = 5 * sp
        for i in range(5):
            j0 = 0.0
            for k in range(5):
                j0 += R[25 * sp + i * 5 + k] * Wt[s + k]
            out[s + i] -= 0.5 * lam[sp] * j0

    r = sqrt(0.5)
    for i in range(4):
        a = PAIRS[axis][i][0]
        b = PAIRS[axis][i][1]
        j0 = lam[2] * Wt[10 + 2 * i]
        j1 = lam[2] * Wt[11 + 2 * i]
        out[10 + a] -= 0.5 * (r * isw[a] * (j0 + j1))
        out[10 + b] -= 0.5 * (r * isw[b] * (j0 - j1))


def line_fluxes(const double[:, :, ::1] cells, double[:, :, ::1] out, int axis, int order,
                double gamma, double c_hat, double xi, double kappa, int nthreads):
    """Fill ``out[line, j]`` with the flux between cells j+1 and j+2.

    Returns the flat index (line * n + cell) of the first inadmissible cell,
    or -1.
    """
    cdef Py_ssize_t nlines = cells.shape[0]
    cdef Py_ssize_t n = cells.shape[1]
    cdef Py_ssize_t line, i, j
    cdef double c2 = c_hat * c_hat
    cdef double ic2 = 1.0 / c2
    cdef double isw[8]
    cdef double* q
    cdef double* V
    cdef double* R
    cdef double* lam
    cdef double* D
    cdef Py_ssize_t k
    cdef long[::1] bad = np.full(nlines, -1, dtype=np.int_)
    for i in range(8):
        isw[i] = 1.0
    for i in (3, 4, 5, 7):
        isw[i] = c_hat  # 1 / sqrt(1 / c^2)
    if n < 4:
        raise ValueError("a line needs at least four cells")
    if out.shape[0] != nlines or out.shape[1] != n - 3:
        raise ValueError("output buffer has the wrong shape")
    if nthreads < 1:
        nthreads = 1
    with nogil, parallel(num_threads=nthreads):
        q = <double*> malloc(n * NV * sizeof(double))
        V = <double*> malloc(n * NV * sizeof(double))
        R = <double*> malloc((n - 1) * 50 * sizeof(double))
        lam = <double*> malloc((n - 1) * 3 * sizeof(double))
        D = <double*> malloc((n - 1) * NV * sizeof(double))
        for line in prange(nlines, schedule="static"):
            for i in range(n):
                if to_prim(&cells[line, i, 0], q + i * NV, gamma):
                    bad[line] = line * n + i
                    break
                entropy_vars(q + i * NV, V + i * NV, gamma, ic2)
            if bad[line] >= 0:
                continue
            # interface k sits between cells k and k+1; each is set up once
            for k in range(n - 1):
                interface_setup(
                    &cells[line, k, 0], &cells[line, k + 1, 0], q + k * NV, q + (k + 1) * NV,
                    V + k * NV, V + (k + 1) * NV, R + k * 50, lam + k * 3, D + k * NV,
                    axis, gamma, c2, xi, kappa, isw,
                )
            for j in range(n - 3):
                interface_flux(
                    &cells[line, j + 1, 0], &cells[line, j + 2, 0],
                    q + (j + 1) * NV, q + (j + 2) * NV,
                    R + (j + 1) * 50, lam + (j + 1) * 3,
                    D + j * NV, D + (j + 1) * NV, D + (j + 2) * NV,
                    &out[line, j, 0], axis, order, gamma, c2, xi, kappa, isw,
                )
        free(q)
        free(V)
        free(R)
        free(lam)
        free(D)
    for line in range(nlines):
        if bad[line] >= 0:
            return bad[line]
    return -1


cdef int W1[6]
cdef int W2[9]
cdef int W3[3]
W1[:] = [0, 5, 10, 11, 12, 17]
W2[:] = [1, 2, 3, 6, 7, 8, 13, 14, 15]
W3[:] = [4, 9, 16]


cdef inline int solve9(double* M, double* b, double* x, double floor) noexcept nogil:
    """Gaussian elimination with partial pivoting on a row-major 9x9 system."""
    cdef int k, i, j, piv
    cdef double best, t, f
    for k in range(9):
        piv = k
        best = fabs(M[k * 9 + k])
        for i in range(k + 1, 9):
            if fabs(M[i * 9 + k]) > best:
                best = fabs(M[i * 9 + k])
                piv = i
        if piv != k:
            for j in range(9):
                t = M[k * 9 + j]
                M[k * 9 + j] = M[piv * 9 + j]
                M[piv * 9 + j] = t
            t = b[k]
            b[k] = b[piv]
            b[piv] = t
        if not fabs(M[k * 9 + k]) >= floor:
            return 1
        for i in range(k + 1, 9):
            f = M[i * 9 + k] / M[k * 9 + k]
            for j in range(k, 9):
                M[i * 9 + j] -= f * M[k * 9 + j]
            b[i] -= f * b[k]
    for k in range(8, -1, -1):
        t = 0.0
        for j in range(k + 1, 9):
            t += M[k * 9 + j] * x[j]
        x[k] = (b[k] - t) / M[k * 9 + k]
    return 0


cdef inline int imex_cell(const double* u, const double* r, double* o, double dt,
                          double gamma, double rg, double lambda_m, double K, double xi,
                          double floor) noexcept nogil:
    cdef double M[81]
    cdef double b[9]
    cdef double x[9]
    cdef double q[NV]
    cdef double rgs[2]
    cdef double rho, Bx, By, Bz, inv
    cdef int k, sp, off
    for k in range(NV):
        o[k] = u[k] + dt * r[k]
    if dt != 0.0:
        Bx = o[10]
        By = o[11]
        Bz = o[12]
        for k in range(81):
            M[k] = 0.0
        rgs[0] = rg
        rgs[1] = -rg / lambda_m
        for sp in range(2):
            off = 3 * sp
            rho = o[5 * sp]
            inv = -dt / rgs[sp]
            M[(off + 0) * 9 + off + 1] = inv * Bz
            M[(off + 0) * 9 + off + 2] = -inv * By
            M[(off + 1) * 9 + off + 0] = -inv * Bz
            M[(off + 1) * 9 + off + 2] = inv * Bx
            M[(off + 2) * 9 + off + 0] = inv * By
            M[(off + 2) * 9 + off + 1] = -inv * Bx
            for k in range(3):
                M[(off + k) * 9 + 6 + k] = inv * rho
        for k in range(3):
            M[(6 + k) * 9 + k] = dt / K
            M[(6 + k) * 9 + 3 + k] = -dt * lambda_m / K
        for k in range(9):
            M[k * 9 + k] += 1.0
            b[k] = o[W2[k]]
        if solve9(M, b, x, floor):
            return 1
        for k in range(9):
            o[W2[k]] = x[k]
        o[4] += dt * ((o[13] * o[1] + o[14] * o[2] + o[15] * o[3]) / rg)
        o[9] += dt * (-lambda_m / rg * (o[13] * o[6] + o[14] * o[7] + o[15] * o[8]))
        o[16] += dt * (xi * (o[0] - lambda_m * o[5]) / K)
    if to_prim(o, q, gamma):
        return 2
    return 0


def imex_update(const double[:, ::1] u, const double[:, ::1] rhs, double[:, ::1] out, double dt,
                double gamma, double r_hat_g, double lambda_m, double K, double xi,
                double pivot_floor, int nthreads):
    """Per-cell IMEX Euler update. Returns (status, cell): 0 ok, 1 singular, 2 inadmissible."""
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i
    cdef signed char[::1] status = np.zeros(n, dtype=np.int8)
    if nthreads < 1:
        nthreads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=nthreads):
        status[i] = imex_cell(&u[i, 0], &rhs[i, 0], &out[i, 0], dt, gamma, r_hat_g,
                              lambda_m, K, xi, pivot_floor)
    for i in range(n):
        if status[i]:
            return int(status[i]), int(i)
    return 0, -1

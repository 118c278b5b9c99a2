# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cell-stiffness kernel; mirrors python_kernel.element_stiffness_matrix."""


def element_stiffness(
    double[:] x,
    double[:] y,
    int m,
    int n,
    double[:, :] db,
    double[:] u,
    double[:] v,
    double[:] w,
    double[:, :, :] shp,
    double det_tol,
    Py_ssize_t[:, :] scatter,
    double[:, :] kmat,
):
    cdef Py_ssize_t nq = w.shape[0]
    cdef double alpha = x[0] - x[1] + x[2] - x[3]
    cdef double beta = y[0] - y[1] + y[2] - y[3]
    cdef double x21 = x[1] - x[0]
    cdef double y21 = y[1] - y[0]
    cdef double x41 = x[3] - x[0]
    cdef double y41 = y[3] - y[0]

    cdef Py_ssize_t cr, cs, q, i, j, a, b, c
    cdef double xi, eta, xs, ys, xe, ye, det, ap, bp, weight
    cdef double j2[3][3]
    cdef double inv[3][3]
    cdef double bm[3][12]
    cdef double tmp[3][12]
    cdef double k12[12][12]
    cdef double d1, d2, d3, r1, r2, r3, idet2
    cdef double fm = <double>m
    cdef double fn = <double>n

    c = 0
    for cr in range(m):
        for cs in range(n):
            for i in range(12):
                for j in range(12):
                    k12[i][j] = 0.0
            for q in range(nq):
                xi = (cr + u[q]) / fm
                eta = (cs + v[q]) / fn
                xs = x21 + alpha * eta
                ys = y21 + beta * eta
                xe = x41 + alpha * xi
                ye = y41 + beta * xi
                det = xs * ye - ys * xe
                if det <= det_tol:
                    raise ValueError(
                        "non-positive Jacobian determinant inside the element"
                    )
                ap = (alpha * ye - beta * xe) / det
                bp = (alpha * ys - beta * xs) / det
                j2[0][0] = xs * xs
                j2[0][1] = ys * ys
                j2[0][2] = 2.0 * xs * ys
                j2[1][0] = xe * xe
                j2[1][1] = ye * ye
                j2[1][2] = 2.0 * xe * ye
                j2[2][0] = xs * xe
                j2[2][1] = ys * ye
                j2[2][2] = xs * ye + ys * xe
                idet2 = (
                    j2[0][0] * (j2[1][1] * j2[2][2] - j2[1][2] * j2[2][1])
                    - j2[0][1] * (j2[1][0] * j2[2][2] - j2[1][2] * j2[2][0])
                    + j2[0][2] * (j2[1][0] * j2[2][1] - j2[1][1] * j2[2][0])
                )
                idet2 = 1.0 / idet2
                inv[0][0] = (j2[1][1] * j2[2][2] - j2[1][2] * j2[2][1]) * idet2
                inv[0][1] = (j2[0][2] * j2[2][1] - j2[0][1] * j2[2][2]) * idet2
                inv[0][2] = (j2[0][1] * j2[1][2] - j2[0][2] * j2[1][1]) * idet2
                inv[1][0] = (j2[1][2] * j2[2][0] - j2[1][0] * j2[2][2]) * idet2
                inv[1][1] = (j2[0][0] * j2[2][2] - j2[0][2] * j2[2][0]) * idet2
                inv[1][2] = (j2[0][2] * j2[1][0] - j2[0][0] * j2[1][2]) * idet2
                inv[2][0] = (j2[1][0] * j2[2][1] - j2[1][1] * j2[2][0]) * idet2
                inv[2][1] = (j2[0][1] * j2[2][0] - j2[0][0] * j2[2][1]) * idet2
                inv[2][2] = (j2[0][0] * j2[1][1] - j2[0][1] * j2[1][0]) * idet2
                for j in range(12):
                    r1 = fm * fm * shp[3, j, q]
                    r2 = fn * fn * shp[4, j, q]
                    r3 = (
                        fm * fn * shp[5, j, q]
                        - ap * fm * shp[1, j, q]
                        + bp * fn * shp[2, j, q]
                    )
                    d1 = inv[0][0] * r1 + inv[0][1] * r2 + inv[0][2] * r3
                    d2 = inv[1][0] * r1 + inv[1][1] * r2 + inv[1][2] * r3
                    d3 = inv[2][0] * r1 + inv[2][1] * r2 + inv[2][2] * r3
                    bm[0][j] = -d1
                    bm[1][j] = -d2
                    bm[2][j] = -2.0 * d3
                for a in range(3):
                    for j in range(12):
                        tmp[a][j] = (
                            db[a, 0] * bm[0][j]
                            + db[a, 1] * bm[1][j]
                            + db[a, 2] * bm[2][j]
                        )
                weight = w[q] * det / (fm * fn)
                for i in range(12):
                    for j in range(12):
                        k12[i][j] += weight * (
                            bm[0][i] * tmp[0][j]
                            + bm[1][i] * tmp[1][j]
                            + bm[2][i] * tmp[2][j]
                        )
            for i in range(12):
                for j in range(12):
                    kmat[scatter[c, i], scatter[c, j]] += k12[i][j]
            c += 1

// SPDX-License-Identifier: Apache-2.0
#include "nonholo/qr_diff.hpp"

#include <cmath>

namespace nonholo {

namespace {

double pivot_threshold(const Mat& A) { return 1e-13 * A.cwiseAbs().maxCoeff(); }

void check_shape(const Mat& A, const SignVector& s) {
    const int n = static_cast<int>(A.rows());
    const int k = static_cast<int>(A.cols());
    if (k < 1 || k > n) throw DimensionMismatch("qr_diff: need 1 <= k <= n");
    if (static_cast<int>(s.size()) != k)
        throw DimensionMismatch("qr_diff: sign vector length != number of columns");
}

}  // namespace

QRDiffOutput qr_diff(const Mat& A, const Tensor3& dA, const SignVector& s) {
    check_shape(A, s);
    const int n = static_cast<int>(A.rows());
    const int k = static_cast<int>(A.cols());
    if (static_cast<int>(dA.size()) != n)
        throw DimensionMismatch("qr_diff: dA must have one slice per q^i");
    const double thresh = pivot_threshold(A);

    Mat Q = Mat::Identity(n, n);
    Mat R = A;
    Tensor3 dQ(n, Mat::Zero(n, n));
    Tensor3 dR = dA;

    for (int t = 0; t < k; ++t) {
        const double nu = R.col(t).tail(n - t).norm();
        if (nu <= thresh)
            throw RankDeficient("qr_diff: vanishing pivot norm at step " + std::to_string(t));
        const double st = static_cast<double>(s[t]);

        Vec wt = Vec::Zero(n);
        wt[t] = R(t, t) + st * nu;
        wt.tail(n - t - 1) = R.col(t).tail(n - t - 1);
        const double wt_norm = std::sqrt(2.0 * (nu * nu + st * R(t, t) * nu));
        const Vec w = wt / wt_norm;
        const Eigen::RowVectorXd u = w.transpose() * R;

        // Derivative recursion uses the pre-update factors throughout.
        const Mat Q_old = Q;
        const Mat R_old = R;

        R -= 2.0 * w * u;
        Q -= 2.0 * (Q_old * w) * w.transpose();

        for (int i = 0; i < n; ++i) {
            const double dnu = dR[i].col(t).tail(n - t).dot(R_old.col(t).tail(n - t)) / nu;
            Vec dwt = Vec::Zero(n);
            dwt[t] = dR[i](t, t) + st * dnu;
            dwt.tail(n - t - 1) = dR[i].col(t).tail(n - t - 1);
            const double dwt_norm = dwt.dot(wt) / wt_norm;
            const Vec dw = (dwt * wt_norm - wt * dwt_norm) / (wt_norm * wt_norm);
            const Eigen::RowVectorXd du = dw.transpose() * R_old + w.transpose() * dR[i];
            dR[i] -= 2.0 * (dw * u + w * du);
            dQ[i] = dQ[i] - 2.0 * (dQ[i] * w) * w.transpose() -
                    2.0 * (Q_old * dw) * w.transpose() - 2.0 * (Q_old * w) * dw.transpose();
        }
    }
    return {std::move(Q), std::move(R), std::move(dQ)};
}

SignVector default_signs(const Mat& A) {
    const int n = static_cast<int>(A.rows());
    const int k = static_cast<int>(A.cols());
    if (k < 1 || k > n) throw DimensionMismatch("default_signs: need 1 <= k <= n");
    const double thresh = pivot_threshold(A);
    Mat R = A;
    SignVector s(k);
    for (int t = 0; t < k; ++t) {
        const double nu = R.col(t).tail(n - t).norm();
        if (nu <= thresh)
            throw RankDeficient("default_signs: vanishing pivot norm at step " +
                                std::to_string(t));
        s[t] = (R(t, t) < 0.0) ? -1 : 1;
        Vec wt = Vec::Zero(n);
        wt[t] = R(t, t) + s[t] * nu;
        wt.tail(n - t - 1) = R.col(t).tail(n - t - 1);
        const Vec w = wt / wt.norm();
        R -= 2.0 * w * (w.transpose() * R);
    }
    return s;
}

Mat qr_orthogonal_factor(const Mat& A, const SignVector& s) {
    check_shape(A, s);
    const int n = static_cast<int>(A.rows());
    const int k = static_cast<int>(A.cols());
    const double thresh = pivot_threshold(A);
    Mat Q = Mat::Identity(n, n);
    Mat R = A;
    for (int t = 0; t < k; ++t) {
        const double nu = R.col(t).tail(n - t).norm();
        if (nu <= thresh)
            throw RankDeficient("qr_orthogonal_factor: vanishing pivot norm at step " +
                                std::to_string(t));
        Vec wt = Vec::Zero(n);
        wt[t] = R(t, t) + s[t] * nu;
        wt.tail(n - t - 1) = R.col(t).tail(n - t - 1);
        const Vec w = wt / wt.norm();
        R -= 2.0 * w * (w.transpose() * R);
        Q -= 2.0 * (Q * w) * w.transpose();
    }
    return Q;
}

ReducedBasis basis_from_constraints(const MechanicalSystem& sys, const SignVector& s) {
    const int n = sys.n;
    const int m = sys.n - sys.k;
    auto mu = sys.constraints;
    auto dmu = sys.constraints_deriv;
    return {m,
            [mu, s, m](const Vec& q) -> Mat {
                return qr_orthogonal_factor(mu(q), s).rightCols(m);
            },
            [mu, dmu, s, n, m](const Vec& q) -> Tensor3 {
                const QRDiffOutput out = qr_diff(mu(q), dmu(q), s);
                Tensor3 dX(n);
                for (int i = 0; i < n; ++i) dX[i] = out.dQ[i].rightCols(m);
                return dX;
            }};
}

Tensor3 fd_basis_derivative(const MechanicalSystem& sys, const Vec& q,
                            const SignVector& s, double h) {
    if (h <= 0.0) throw ConfigError("fd_basis_derivative: h must be positive");
    Tensor3 dX(sys.n);
    Vec qp = q, qm = q;
    for (int i = 0; i < sys.n; ++i) {
        qp[i] += h;
        qm[i] -= h;
        const Mat Xp = qr_orthogonal_factor(sys.constraints(qp), s).rightCols(sys.n - sys.k);
        const Mat Xm = qr_orthogonal_factor(sys.constraints(qm), s).rightCols(sys.n - sys.k);
        dX[i] = (Xp - Xm) / (2.0 * h);
        qp[i] = q[i];
        qm[i] = q[i];
    }
    return dX;
}

ReducedBasis fd_basis_from_constraints(const MechanicalSystem& sys, const SignVector& s,
                                       double fd_h) {
    const int m = sys.n - sys.k;
    auto mu = sys.constraints;
    return {m,
            [mu, s, m](const Vec& q) -> Mat {
                return qr_orthogonal_factor(mu(q), s).rightCols(m);
            },
            [sys, s, fd_h](const Vec& q) -> Tensor3 {
                return fd_basis_derivative(sys, q, s, fd_h);
            }};
}

}  // namespace nonholo

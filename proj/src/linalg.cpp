#include "wgsir/linalg.hpp"

#include <cmath>
#include <string>

#include "wgsir/error.hpp"

namespace wgsir {

namespace {

void check_finite(const Eigen::MatrixXd& a, const char* what)
{
    if (!a.allFinite())
        throw Error(std::string(what) + ": non-finite entries");
}

} // namespace

EigenResult sym_eig(const Eigen::MatrixXd& a)
{
    if (a.rows() != a.cols())
        throw Error("sym_eig: matrix is not square");
    check_finite(a, "sym_eig");
    const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error("sym_eig: eigensolver did not converge");

    // Eigen returns ascending order.
    const Eigen::Index n = sym.rows();
    EigenResult out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index arg = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
        if (out.vectors(arg, j) < 0.0)
            out.vectors.col(j) = -out.vectors.col(j);
    }
    return out;
}

Eigen::MatrixXd ridge_inverse_apply(const Eigen::MatrixXd& a, double eta, const Eigen::MatrixXd& b)
{
    if (a.rows() != a.cols() || a.rows() != b.rows())
        throw Error("ridge_inverse_apply: dimension mismatch");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw Error("ridge_inverse_apply: eta must be positive and finite");
    check_finite(a, "ridge_inverse_apply");
    check_finite(b, "ridge_inverse_apply");

    Eigen::MatrixXd shifted = 0.5 * (a + a.transpose());
    shifted.diagonal().array() += eta;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success)
        return llt.solve(b);
    // Tiny negative eigenvalues from rounding can defeat Cholesky when eta is small.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
        throw Error("ridge_inverse_apply: factorization failed");
    return ldlt.solve(b);
}

double max_eigenvalue(const Eigen::MatrixXd& a)
{
    if (a.rows() == 0)
        throw Error("max_eigenvalue: empty matrix");
    check_finite(a, "max_eigenvalue");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(a.rows() - 1);
}

} // namespace wgsir

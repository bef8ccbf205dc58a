#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace pqed {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Triplet = Eigen::Triplet<Complex>;

}  // namespace pqed

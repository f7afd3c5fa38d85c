#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

namespace gridbus {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Y += alpha * A * X. Row-major CSR times row-major dense, column-panel
// blocked. Fixed evaluation order: runs are bit-reproducible.
void spmm_acc(cplx alpha, const SpMat& A, const DenseMat& X, DenseMat& Y);

// out = B + B^dagger, blocked transpose traversal.
void assemble_adjoint_sum(const DenseMat& B, DenseMat& out);

// Operator with at most one nonzero per row: row i carries value val at
// column col. Site annihilators and qubit lowering operators embedded in
// a tensor-product space always have this shape, which reduces
// L rho L^dag to a scaled two-sided gather.
struct CollapseMap {
  std::vector<int> row;   // rows holding an entry
  std::vector<int> col;   // entry column per row
  std::vector<cplx> val;  // entry value per row

  // Throws NumericError if some row has more than one nonzero.
  static CollapseMap from_sparse(const SpMat& L);

  // out += L rho L^dag
  void apply_acc(const DenseMat& rho, DenseMat& out) const;
};

cplx trace_of(const DenseMat& m);
double hermiticity_defect(const DenseMat& m);  // ||m - m^dag||_F

}  // namespace gridbus

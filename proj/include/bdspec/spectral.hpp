#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bdspec/model.hpp"
#include "bdspec/quadrature.hpp"

namespace bdspec {

/// Behavior of a density at a piece endpoint: vanishing like sqrt(d),
/// diverging like 1/sqrt(d), or neither.
enum class EndpointKind { SqrtVanishing, InverseSqrt, Regular };

enum class Component { S11, S12, S22 };

/// Symmetric 2x2 matrix (density value or atom weight).
struct SymMat2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m12; }
    double min_eigenvalue() const;
    double component(Component c) const {
        return c == Component::S11 ? m11 : (c == Component::S12 ? m12 : m22);
    }
};

/// One absolutely continuous piece of a matrix measure: interval [a,b] plus a
/// pointwise density evaluator, finite and PSD strictly inside (a,b).
struct MatrixPiece {
    double a = 0.0;
    double b = 0.0;
    EndpointKind left = EndpointKind::Regular;
    EndpointKind right = EndpointKind::Regular;
    std::function<SymMat2(double)> density;
};

/// A Dirac atom of the matrix measure. The catalog atoms are rank one
/// (simple eigenvalues), and the factored form scale * v v^T is what the
/// Karlin-McGregor sums contract against: it keeps the eigenvector exact,
/// which matters because the polynomials are large at atom locations.
struct MatrixAtom {
    double location = 0.0;
    double scale = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    SymMat2 weight;  // scale * v v^T, kept consistent with the factors

    static MatrixAtom make(double location, double scale, double v1, double v2) {
        MatrixAtom a;
        a.location = location;
        a.scale = scale;
        a.v1 = v1;
        a.v2 = v2;
        a.weight = {scale * v1 * v1, scale * v1 * v2, scale * v2 * v2};
        return a;
    }
};

/// The 2x2 spectral matrix of a bilateral model: AC pieces plus weighted
/// Dirac atoms. Total masses: integral dpsi11 = 1, dpsi12 = 0,
/// dpsi22 = lambda_{-1}/mu_0 = 1/pi_{-1}.
struct SpectralMatrix {
    std::vector<MatrixPiece> pieces;
    std::vector<MatrixAtom> atoms;
    double pi_minus1 = 1.0;
    double lambda_m1 = 0.0;
    double mu_0 = 0.0;

    double support_min() const;
    double support_max() const;
};

struct ScalarPiece {
    double a = 0.0;
    double b = 0.0;
    EndpointKind left = EndpointKind::Regular;
    EndpointKind right = EndpointKind::Regular;
    std::function<double(double)> density;
};

struct ScalarAtom {
    double location = 0.0;
    double weight = 0.0;
};

/// Scalar spectral measure of a half-line factor; total mass 1.
struct SpectralMeasure {
    std::vector<ScalarPiece> pieces;
    std::vector<ScalarAtom> atoms;

    double support_min() const;
    double support_max() const;
};

/// Upper-edge boundary value B(x + i0) of the Stieltjes transform of the
/// half-line factor's spectral measure. Real x anywhere: off the support the
/// value is real, on the support Im B = pi * density.
std::complex<double> halfline_transform_boundary(const CatalogModel& model, Side side, double x);

/// Extended-precision variant; the Karlin-McGregor sums amplify the last bits
/// of the transform values through the potential coefficients at far indices.
std::complex<long double> halfline_transform_boundary_ld(const CatalogModel& model, Side side,
                                                         double x);

/// Spectral measure of a half-line factor (A+ or A-). For the M/M/1 model
/// only Side::Plus exists.
SpectralMeasure spectral_measure_halfline(const CatalogModel& model, Side side = Side::Plus);

/// Spectral matrix of a bilateral catalog model.
SpectralMatrix spectral_matrix(const CatalogModel& model);

/// Closed-form Stieltjes transforms at real z strictly below the support.
double stieltjes_halfline_closed(const CatalogModel& model, Side side, double z);
double stieltjes_closed(const CatalogModel& model, Component c, double z);
/// Scalar version for the half-line M/M/1 model.
double stieltjes_closed_scalar(const CatalogModel& model, double z);

/// Quadrature route: AC pieces by cosine-substituted Gauss-Legendre plus the
/// atom sum. z must be at least 1e-9 below the support minimum.
double stieltjes_quadrature(const SpectralMatrix& s, Component c, double z,
                            const QuadratureConfig& cfg = {});
double stieltjes_quadrature(const SpectralMeasure& s, double z, const QuadratureConfig& cfg = {});

/// Residuals of the three coupling relations at z: quadrature on the
/// constructed spectral matrix against the half-line closed forms.
struct CouplingResiduals {
    double r11 = 0.0;
    double r22 = 0.0;
    double r12 = 0.0;
    double max_abs() const;
};
CouplingResiduals verify_coupling(const CatalogModel& model, double z,
                                  const QuadratureConfig& cfg = {});

/// The six interval arrangements of the split-queues spectral support.
enum class SplitArrangement {
    DisjointSigmaLow,  // [s-,s+] entirely below [t-,t+]
    DisjointTauLow,
    TauInsideSigma,
    SigmaInsideTau,
    OverlapSigmaLow,  // s- < t- < s+ < t+
    OverlapTauLow,
};
SplitArrangement split_arrangement(const CatalogModel& model);
std::string split_arrangement_name(SplitArrangement a);

/// JSON document for the CLI `spectral` command: pieces with densities
/// sampled on a grid of the given size, atoms with their weights.
std::string spectral_to_json(const CatalogModel& model, int grid_points);

}  // namespace bdspec

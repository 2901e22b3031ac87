#pragma once

#include "bppnet/error.hpp"

namespace bppnet {

enum class DistanceBranch {
    Inner, // [0, r_d - nu0]: the whole circle of radius w lies in the disk
    Outer, // (r_d - nu0, r_d + nu0]: the circle is clipped by the disk edge
};

// Law of the distance from a receiver at radius nu0 to a point uniform on
// the disk of radius r_d. Piecewise with breakpoints w- = r_d - nu0 and
// w+ = r_d + nu0; w- itself belongs to the inner branch.
class PiecewiseDistanceLaw {
public:
    PiecewiseDistanceLaw(double nu0, double disk_radius);

    double nu0() const noexcept { return nu0_; }
    double disk_radius() const noexcept { return rd_; }
    double inner_break() const noexcept { return w_minus_; }
    double outer_break() const noexcept { return w_plus_; }
    bool central() const noexcept { return nu0_ == 0.0; }

    DistanceBranch branch(double w) const;

    double pdf(double w) const;
    double cdf(double w) const;
    // 1 - cdf(w), evaluated without cancellation near w+.
    double ccdf(double w) const;

    // Branch formulas evaluated as written, without the support switch.
    double inner_pdf(double w) const;
    double inner_cdf(double w) const;
    double outer_pdf(double w) const;
    double outer_cdf(double w) const;

private:
    void check_support(double w) const;
    double theta_star(double w) const;
    double phi_star(double w) const;
    double phi_star_complement(double w) const; // pi - phi*

    double nu0_;
    double rd_;
    double w_minus_;
    double w_plus_;
};

double central_pdf(double w, double disk_radius);
double central_cdf(double w, double disk_radius);

double cond_cdf_w(double w, double nu0, double disk_radius);
double cond_pdf_w(double w, double nu0, double disk_radius);

// Serving distance under uniform selection: any node's distance law.
double serving_pdf_uniform(double r, double nu0, double disk_radius);

struct OrderStatConfig {
    int k = 1;
    int n_tx = 1;
    PiecewiseDistanceLaw law{0.0, 1.0};
};

// Density and CDF of the k-th smallest of n_tx i.i.d. distances.
double serving_pdf_kclosest(double r, const OrderStatConfig& cfg);
double serving_cdf_kclosest(double r, const OrderStatConfig& cfg);

// Distance of an interferer known to be closer (in) or farther (out) than
// the serving node at distance r.
double pdf_u_in(double u, double nu0, double r, double disk_radius);
double pdf_u_out(double u, double nu0, double r, double disk_radius);

// Radius of a receiver uniform on the disk.
double pdf_v0(double nu0, double disk_radius);

// n! / ((k-1)! (n-k)!)
double order_statistic_coefficient(int k, int n);
double binomial(int n, int k);

} // namespace bppnet

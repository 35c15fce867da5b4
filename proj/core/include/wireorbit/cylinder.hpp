#pragma once

namespace wireorbit {

// Cylinder functions of the first and second kind, order 0 and 1.
// Power series for small argument, Hankel asymptotic expansion for large.
// Valid for x > 0 (Y0/Y1) and x >= 0 (J0/J1).

double cyl_j0(double x);
double cyl_y0(double x);
double cyl_j1(double x);
double cyl_y1(double x);

}  // namespace wireorbit

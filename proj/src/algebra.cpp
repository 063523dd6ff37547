#include "ymb/algebra.hpp"

namespace ymb {

Rotation3 rotation_of(const UnitQuat& g) {
    Rotation3 r;
    for (int i = 0; i < 3; ++i) {
        ImQuat e;
        e.c[i] = 1.0;
        const ImQuat col = adjoint(g, e);
        for (int k = 0; k < 3; ++k) r(k, i) = col.c[k];
    }
    return r;
}

Rotation3 reorthonormalize(const Rotation3& r) {
    Eigen::JacobiSVD<Rotation3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Rotation3 u = svd.matrixU();
    Rotation3 v = svd.matrixV();
    Eigen::Vector3d d(1.0, 1.0, (u * v.transpose()).determinant() > 0 ? 1.0 : -1.0);
    return u * d.asDiagonal() * v.transpose();
}

} // namespace ymb

#include <doctest.h>

#include <cmath>
#include <vector>

#include "dmverify/kernels.hpp"
#include "test_helpers.hpp"

using namespace dmv;
using dmv::testing::random_w_point;

namespace {

const std::vector<SpaceSpec> kFamilies = {
    SpaceSpec::aiii(1, 1, Sign::Compact), SpaceSpec::aiii(2, 1, Sign::Compact),
    SpaceSpec::aiii(2, 2, Sign::Compact), SpaceSpec::ci(1, Sign::Compact),
    SpaceSpec::ci(2, Sign::Compact),      SpaceSpec::diii(2, Sign::Compact),
    SpaceSpec::diii(3, Sign::Compact)};

CMatrix scalar(Complex v) {
    CMatrix m(1, 1);
    m << v;
    return m;
}

} // namespace

TEST_CASE("q_map at the origin is the signature matrix") {
    for (const auto& spec : kFamilies) {
        const CoordinatePair origin{spec, CMatrix::Zero(spec.p, spec.q),
                                    CMatrix::Zero(spec.q, spec.p)};
        CHECK(inf_norm(q_map(origin).m - s_matrix(spec)) < 1e-14);
    }
}

TEST_CASE("q_map scalar value and involution") {
    const SpaceSpec spec = SpaceSpec::aiii(1, 1, Sign::Compact);
    const KernelMatrix k = q_map({spec, scalar(0.5), scalar(0.5)});
    CHECK(k.m(0, 0).real() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(k.m(0, 1).real() == doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
    CHECK(k.m(1, 0).real() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(k.m(1, 1).real() == doctest::Approx(-5.0 / 3.0).epsilon(1e-14));

    SeedStream stream(3);
    for (const auto& spec2 : kFamilies) {
        const CMatrix z = 0.4 * dmv::testing::random_cmatrix(spec2.p, spec2.q, stream, 0.5);
        const CMatrix zt = 0.4 * dmv::testing::random_cmatrix(spec2.q, spec2.p, stream, 0.5);
        const KernelMatrix k2 = q_map({spec2, z, zt});
        CHECK(inf_norm(k2.m * k2.m - CMatrix::Identity(spec2.n(), spec2.n())) < 1e-10);
    }

    CHECK_THROWS_AS(q_map({spec, scalar(1.0), scalar(1.0)}), NearSingular);
}

TEST_CASE("r_map values on the scalar slices") {
    const SpaceSpec spec = SpaceSpec::aiii(1, 1, Sign::Compact);
    const CoordinatePair zero =
        r_map(spec, Sign::Noncompact, scalar(0.0), scalar(0.0));
    CHECK(inf_norm(zero.z) == 0.0);
    CHECK(inf_norm(zero.ztilde) == 0.0);

    const CoordinatePair nc = r_map(spec, Sign::Noncompact, scalar(1.0), scalar(1.0));
    CHECK(nc.z(0, 0).real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(nc.ztilde(0, 0).real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));

    // Compact slice at b = 1/sqrt(2): R_- lands on Z = -1; feeding that image
    // into the *noncompact* slice pairing (Z, Z^dag) sits exactly on the chart
    // boundary 1 - Z Z~ = 0 and q_map reports it.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const CoordinatePair c = r_map(spec, Sign::Compact, scalar(inv_sqrt2), scalar(inv_sqrt2));
    CHECK(c.z(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(c.ztilde(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_NOTHROW(q_map(c));
    CHECK_THROWS_AS(q_map({spec, c.z, c.z.adjoint()}), NearSingular);

    CHECK_THROWS_AS(r_map(spec, Sign::Compact, scalar(1.5), scalar(1.5)),
                    NotPositiveDefinite);
}

TEST_CASE("homotopy scalar values") {
    const SpaceSpec spec = SpaceSpec::aiii(1, 1, Sign::Compact);
    const HomotopyPoint h0 = homotopy(spec, Sign::Noncompact, 0.0, scalar(0.6));
    CHECK(inf_norm(h0.bprime - scalar(0.6)) < 1e-15);
    CHECK(inf_norm(h0.btilde - scalar(0.6)) < 1e-15);

    const HomotopyPoint hn = homotopy(spec, Sign::Noncompact, 1.0, scalar(0.6));
    CHECK(hn.bprime(0, 0).real() == doctest::Approx(0.6 * std::sqrt(1.36)).epsilon(1e-12));
    CHECK(hn.btilde(0, 0).real() == doctest::Approx(0.6 / std::sqrt(1.36)).epsilon(1e-12));

    const HomotopyPoint hc = homotopy(spec, Sign::Compact, 1.0, scalar(0.6));
    CHECK(hc.bprime(0, 0).real() == doctest::Approx(0.48).epsilon(1e-12));
    CHECK(hc.btilde(0, 0).real() == doctest::Approx(0.75).epsilon(1e-12));

    CHECK_THROWS_AS(homotopy(spec, Sign::Compact, 1.2, scalar(0.5)), OutOfRange);
}

TEST_CASE("dm_kernel scalar closed forms") {
    const SpaceSpec spec = SpaceSpec::aiii(1, 1, Sign::Compact);
    for (double t : {0.0, 0.3, 1.0}) {
        CHECK(inf_norm(dm_kernel(spec, Sign::Compact, t, scalar(0.0)).m - s_matrix(spec)) <
              1e-15);
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const KernelMatrix kc = dm_kernel(spec, Sign::Compact, 1.0, scalar(inv_sqrt2));
    CHECK(std::abs(kc.m(0, 0)) < 1e-14);
    CHECK(kc.m(0, 1).real() == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(kc.m(1, 0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(kc.m(1, 1)) < 1e-14);
    CHECK(inf_norm(kc.m * kc.m - CMatrix::Identity(2, 2)) < 1e-12);

    const KernelMatrix kn = dm_kernel(spec, Sign::Noncompact, 0.0, scalar(1.0));
    CHECK(kn.m(0, 0).real() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(kn.m(0, 1).real() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(kn.m(1, 0).real() == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(kn.m(1, 1).real() == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(inf_norm(kn.m * kn.m - CMatrix::Identity(2, 2)) < 1e-12);
    // Pseudo-Hermiticity at t = 0.
    const CMatrix s = s_matrix(spec);
    CHECK(inf_norm(kn.m.adjoint() - s * kn.m * s) < 1e-12);

    CHECK_THROWS_AS(dm_kernel(spec, Sign::Compact, -0.1, scalar(0.5)), OutOfRange);
}

TEST_CASE("dm_kernel invariants across families, signs, and t") {
    SeedStream stream(2718);
    for (const auto& base : kFamilies) {
        for (Sign sign : {Sign::Compact, Sign::Noncompact}) {
            SpaceSpec spec = base;
            spec.sign = sign;
            for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                for (int rep = 0; rep < 4; ++rep) {
                    const CMatrix b = random_w_point(spec, sign, stream);
                    const KernelMatrix k = dm_kernel(spec, sign, t, b);
                    const KernelDiagnostics diag = check_kernel(k.m, spec);
                    CHECK(diag.involution_residual < 1e-10);
                    CHECK(diag.trace_residual < 1e-12);
                    CHECK(diag.transpose_residual < 1e-10);
                    // Deformed (pseudo-)Hermiticity holds for every t.
                    CHECK(dm_hermiticity_residual(spec, sign, t, b, k.m) < 1e-10);
                    // Plain (pseudo-)Hermiticity only at t = 0.
                    if (t == 0.0) CHECK(diag.hermiticity_residual < 1e-10);
                    // Diagonal blocks do not move with t.
                    const KernelMatrix k0 = dm_kernel(spec, sign, 0.0, b);
                    CHECK(inf_norm(k.m.topLeftCorner(spec.p, spec.p) -
                                   k0.m.topLeftCorner(spec.p, spec.p)) < 1e-14);
                    CHECK(inf_norm(k.m.bottomRightCorner(spec.q, spec.q) -
                                   k0.m.bottomRightCorner(spec.q, spec.q)) < 1e-14);
                }
            }
        }
    }
}

TEST_CASE("the DM hallmark: Hermiticity fails for t > 0") {
    SeedStream stream(31);
    const SpaceSpec spec = SpaceSpec::aiii(2, 2, Sign::Compact);
    const CMatrix b = random_w_point(spec, Sign::Compact, stream);
    const KernelDiagnostics diag =
        check_kernel(dm_kernel(spec, Sign::Compact, 1.0, b).m, spec);
    CHECK(diag.hermiticity_residual > 1e-3);
}

TEST_CASE("dm_kernel equals q_map o r_map o homotopy") {
    SeedStream stream(1618);
    for (const auto& base : kFamilies) {
        for (Sign sign : {Sign::Compact, Sign::Noncompact}) {
            SpaceSpec spec = base;
            spec.sign = sign;
            for (int rep = 0; rep < 5; ++rep) {
                const double t = stream.uniform();
                const CMatrix b = random_w_point(spec, sign, stream, 0.8);
                const HomotopyPoint h = homotopy(spec, sign, t, b);
                const CoordinatePair pair = r_map(spec, sign, h.bprime, h.btilde);
                const KernelMatrix composed = q_map(pair);
                const KernelMatrix direct = dm_kernel(spec, sign, t, b);
                CHECK(inf_norm(composed.m - direct.m) <
                      1e-10 * std::max(1.0, inf_norm(direct.m)));
            }
        }
    }
}

TEST_CASE("homotopy_svd_form matches the direct homotopy") {
    const SpaceSpec scalar_spec = SpaceSpec::aiii(1, 1, Sign::Compact);
    const HomotopyPoint h = homotopy_svd_form(scalar_spec, Sign::Noncompact, 1.0,
                                              CMatrix::Identity(1, 1), scalar(0.6),
                                              CMatrix::Identity(1, 1));
    CHECK(h.bprime(0, 0).real() == doctest::Approx(0.6 * std::sqrt(1.36)).epsilon(1e-12));

    const HomotopyPoint hz = homotopy_svd_form(scalar_spec, Sign::Compact, 0.7,
                                               CMatrix::Identity(1, 1), scalar(0.0),
                                               CMatrix::Identity(1, 1));
    CHECK(inf_norm(hz.bprime) == 0.0);
    CHECK(inf_norm(hz.btilde) == 0.0);

    // CI N=2 through takagi: b = u D u^T, so v = conj(u).
    SeedStream stream(505);
    SpaceSpec ci = SpaceSpec::ci(2, Sign::Compact);
    const CMatrix b = random_w_point(ci, Sign::Compact, stream, 0.8);
    const TakagiResult tk = takagi(b);
    const CMatrix dmat = CMatrix(tk.d.asDiagonal());
    const HomotopyPoint hsvd =
        homotopy_svd_form(ci, Sign::Compact, 0.4, tk.u, dmat, tk.u.conjugate());
    const HomotopyPoint hdir = homotopy(ci, Sign::Compact, 0.4, b);
    CHECK(inf_norm(hsvd.bprime - hdir.bprime) < 1e-10);
    CHECK(inf_norm(hsvd.btilde - hdir.btilde) < 1e-10);
}

TEST_CASE("DmKernelEvaluator agrees with dm_kernel and caches the trace") {
    SeedStream stream(404);
    for (const auto& base : {SpaceSpec::aiii(2, 2, Sign::Compact),
                             SpaceSpec::diii(3, Sign::Compact)}) {
        for (Sign sign : {Sign::Compact, Sign::Noncompact}) {
            SpaceSpec spec = base;
            spec.sign = sign;
            DmKernelEvaluator eval(spec, sign);
            for (int rep = 0; rep < 5; ++rep) {
                const CMatrix b = random_w_point(spec, sign, stream);
                eval.set_point(b);
                for (double t : {0.0, 0.5, 1.0}) {
                    const CMatrix& fast = eval.kernel(t);
                    const KernelMatrix slow = dm_kernel(spec, sign, t, b);
                    CHECK(inf_norm(fast - slow.m) < 1e-12 * std::max(1.0, inf_norm(slow.m)));
                    // trace(s M) = p + q -+ 4 tr(b b^dag), independent of t.
                    const double expected =
                        spec.n() + (sign == Sign::Compact ? -4.0 : 4.0) * eval.trace_bbdag();
                    CHECK(trace_s_m(spec, fast) == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }
}

#include "wireorbit/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace wireorbit {
namespace {

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett & Wanner).
namespace dp {
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 1.0 / 3.0;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;
}  // namespace dp

// thrown by the guarded right-hand side when a stage leaves r > 0
struct StepReject {};

using RhsFn = std::function<Vec2(double, const Vec2&)>;

Vec2 axpy(const Vec2& y, double h, const Vec2& k) {
    return {y[0] + h * k[0], y[1] + h * k[1]};
}

struct StepRecord {
    double t_left = 0.0, t_right = 0.0;
    Vec2 y_right{};
    std::array<Vec2, 8> dense{};
    bool has_dense = false;
};

/**
 * One adaptive integration pass. Calls on_step after every accepted step;
 * stop early by returning false from the callback.
 */
void drive_dop853(const RhsFn& rhs, double t0, Vec2 y0, double t_end, double tol,
                  bool want_dense, const std::function<bool(const StepRecord&)>& on_step,
                  long max_steps = 20'000'000) {
    if (!(t_end > t0)) throw std::invalid_argument("integrate: t1 must exceed t0");

    const double atol = tol, rtol = tol;
    double t = t0;
    Vec2 y = y0;
    Vec2 f0 = rhs(t, y);

    // Hairer's two-phase initial step estimate
    auto rms = [&](const Vec2& v, const Vec2& ref) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = atol + rtol * std::abs(ref[i]);
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(0.5 * s);
    };
    double h;
    {
        const double d0 = rms(y, y), d1 = rms(f0, y);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_end - t0);
        double d2 = 0.0;
        try {
            const Vec2 y1 = axpy(y, h0, f0);
            const Vec2 f1 = rhs(t + h0, y1);
            d2 = rms({f1[0] - f0[0], f1[1] - f0[1]}, y) / h0;
        } catch (const StepReject&) {
            d2 = 1.0 / h0;
        }
        double h1;
        if (std::max(d1, d2) <= 1e-15) h1 = std::max(1e-6, h0 * 1e-3);
        else h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
        h = std::min({100.0 * h0, h1, t_end - t0});
    }

    constexpr double safe = 0.9, min_scale = 1.0 / 3.0, max_scale = 6.0;
    constexpr double alpha = 1.0 / 8.0;
    bool last_rejected = false;

    for (long step = 0; step < max_steps; ++step) {
        if (t >= t_end) return;
        h = std::min(h, t_end - t);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::abs(t_end))
            throw std::runtime_error("integrate: step-size underflow (r <= 0 or tolerance too tight)");

        Vec2 k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12;
        Vec2 ksum, y_new, f_new;
        bool rejected_by_domain = false;
        try {
            using namespace dp;
            k2 = rhs(t + c2 * h, axpy(y, h * a21, f0));
            k3 = rhs(t + c3 * h, {y[0] + h * (a31 * f0[0] + a32 * k2[0]),
                                  y[1] + h * (a31 * f0[1] + a32 * k2[1])});
            k4 = rhs(t + c4 * h, {y[0] + h * (a41 * f0[0] + a43 * k3[0]),
                                  y[1] + h * (a41 * f0[1] + a43 * k3[1])});
            k5 = rhs(t + c5 * h, {y[0] + h * (a51 * f0[0] + a53 * k3[0] + a54 * k4[0]),
                                  y[1] + h * (a51 * f0[1] + a53 * k3[1] + a54 * k4[1])});
            k6 = rhs(t + c6 * h, {y[0] + h * (a61 * f0[0] + a64 * k4[0] + a65 * k5[0]),
                                  y[1] + h * (a61 * f0[1] + a64 * k4[1] + a65 * k5[1])});
            k7 = rhs(t + c7 * h,
                     {y[0] + h * (a71 * f0[0] + a74 * k4[0] + a75 * k5[0] + a76 * k6[0]),
                      y[1] + h * (a71 * f0[1] + a74 * k4[1] + a75 * k5[1] + a76 * k6[1])});
            k8 = rhs(t + c8 * h, {y[0] + h * (a81 * f0[0] + a84 * k4[0] + a85 * k5[0] +
                                              a86 * k6[0] + a87 * k7[0]),
                                  y[1] + h * (a81 * f0[1] + a84 * k4[1] + a85 * k5[1] +
                                              a86 * k6[1] + a87 * k7[1])});
            k9 = rhs(t + c9 * h,
                     {y[0] + h * (a91 * f0[0] + a94 * k4[0] + a95 * k5[0] + a96 * k6[0] +
                                  a97 * k7[0] + a98 * k8[0]),
                      y[1] + h * (a91 * f0[1] + a94 * k4[1] + a95 * k5[1] + a96 * k6[1] +
                                  a97 * k7[1] + a98 * k8[1])});
            k10 = rhs(t + c10 * h,
                      {y[0] + h * (a101 * f0[0] + a104 * k4[0] + a105 * k5[0] + a106 * k6[0] +
                                   a107 * k7[0] + a108 * k8[0] + a109 * k9[0]),
                       y[1] + h * (a101 * f0[1] + a104 * k4[1] + a105 * k5[1] + a106 * k6[1] +
                                   a107 * k7[1] + a108 * k8[1] + a109 * k9[1])});
            k11 = rhs(t + c11 * h,
                      {y[0] + h * (a111 * f0[0] + a114 * k4[0] + a115 * k5[0] + a116 * k6[0] +
                                   a117 * k7[0] + a118 * k8[0] + a119 * k9[0] + a1110 * k10[0]),
                       y[1] + h * (a111 * f0[1] + a114 * k4[1] + a115 * k5[1] + a116 * k6[1] +
                                   a117 * k7[1] + a118 * k8[1] + a119 * k9[1] + a1110 * k10[1])});
            k12 = rhs(t + h,
                      {y[0] + h * (a121 * f0[0] + a124 * k4[0] + a125 * k5[0] + a126 * k6[0] +
                                   a127 * k7[0] + a128 * k8[0] + a129 * k9[0] + a1210 * k10[0] +
                                   a1211 * k11[0]),
                       y[1] + h * (a121 * f0[1] + a124 * k4[1] + a125 * k5[1] + a126 * k6[1] +
                                   a127 * k7[1] + a128 * k8[1] + a129 * k9[1] + a1210 * k10[1] +
                                   a1211 * k11[1])});
            for (int i = 0; i < 2; ++i) {
                ksum[i] = b1 * f0[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                          b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
                y_new[i] = y[i] + h * ksum[i];
            }
            if (!(y_new[0] > 0.0)) throw StepReject{};
            f_new = rhs(t + h, y_new);
        } catch (const StepReject&) {
            rejected_by_domain = true;
        }

        double err = 0.0;
        if (!rejected_by_domain) {
            using namespace dp;
            double err3 = 0.0, err5 = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                const double e3 = ksum[i] - bhh1 * f0[i] - bhh2 * k9[i] - bhh3 * k12[i];
                const double e5 = er1 * f0[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] +
                                  er9 * k9[i] + er10 * k10[i] + er11 * k11[i] + er12 * k12[i];
                err3 += (e3 / sc) * (e3 / sc);
                err5 += (e5 / sc) * (e5 / sc);
            }
            double deno = err5 + 0.01 * err3;
            if (deno <= 0.0) deno = 1.0;
            err = h * err5 / std::sqrt(2.0 * deno);
        }

        if (rejected_by_domain || err > 1.0) {
            const double scale = rejected_by_domain
                                     ? min_scale
                                     : std::max(safe * std::pow(err, -alpha), min_scale);
            h *= scale;
            last_rejected = true;
            continue;
        }

        StepRecord rec;
        rec.t_left = t;
        rec.t_right = t + h;
        rec.y_right = y_new;
        if (want_dense) {
            using namespace dp;
            std::array<Vec2, 8>& r = rec.dense;
            std::array<double, 2> c5a{}, c6a{}, c7a{}, c8a{};
            for (int i = 0; i < 2; ++i) {
                r[0][i] = y[i];
                r[1][i] = y_new[i] - y[i];
                r[2][i] = h * f0[i] - r[1][i];
                r[3][i] = r[1][i] - h * f_new[i] - r[2][i];
                c5a[i] = d41 * f0[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] +
                         d410 * k10[i] + d411 * k11[i] + d412 * k12[i];
                c6a[i] = d51 * f0[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] +
                         d510 * k10[i] + d511 * k11[i] + d512 * k12[i];
                c7a[i] = d61 * f0[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] +
                         d610 * k10[i] + d611 * k11[i] + d612 * k12[i];
                c8a[i] = d71 * f0[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] +
                         d710 * k10[i] + d711 * k11[i] + d712 * k12[i];
            }
            try {
                Vec2 ys, k14, k15, k16;
                for (int i = 0; i < 2; ++i)
                    ys[i] = y[i] + h * (a141 * f0[i] + a147 * k7[i] + a148 * k8[i] +
                                        a149 * k9[i] + a1410 * k10[i] + a1411 * k11[i] +
                                        a1412 * k12[i] + a1413 * f_new[i]);
                k14 = rhs(t + c14 * h, ys);
                for (int i = 0; i < 2; ++i)
                    ys[i] = y[i] + h * (a151 * f0[i] + a156 * k6[i] + a157 * k7[i] +
                                        a158 * k8[i] + a1511 * k11[i] + a1512 * k12[i] +
                                        a1513 * f_new[i] + a1514 * k14[i]);
                k15 = rhs(t + c15 * h, ys);
                for (int i = 0; i < 2; ++i)
                    ys[i] = y[i] + h * (a161 * f0[i] + a166 * k6[i] + a167 * k7[i] +
                                        a168 * k8[i] + a169 * k9[i] + a1613 * f_new[i] +
                                        a1614 * k14[i] + a1615 * k15[i]);
                k16 = rhs(t + c16 * h, ys);
                for (int i = 0; i < 2; ++i) {
                    r[4][i] = h * (c5a[i] + d413 * f_new[i] + d414 * k14[i] + d415 * k15[i] +
                                   d416 * k16[i]);
                    r[5][i] = h * (c6a[i] + d513 * f_new[i] + d514 * k14[i] + d515 * k15[i] +
                                   d516 * k16[i]);
                    r[6][i] = h * (c7a[i] + d613 * f_new[i] + d614 * k14[i] + d615 * k15[i] +
                                   d616 * k16[i]);
                    r[7][i] = h * (c8a[i] + d713 * f_new[i] + d714 * k14[i] + d715 * k15[i] +
                                   d716 * k16[i]);
                }
                rec.has_dense = true;
            } catch (const StepReject&) {
                // dense stages strayed out of the domain; reject and retry smaller
                h *= min_scale;
                last_rejected = true;
                continue;
            }
        }

        t = rec.t_right;
        y = y_new;
        f0 = f_new;

        double scale = err == 0.0 ? max_scale
                                  : std::clamp(safe * std::pow(err, -alpha), min_scale, max_scale);
        if (last_rejected) scale = std::min(scale, 1.0);
        h *= scale;
        last_rejected = false;

        if (!on_step(rec)) return;
    }
    throw std::runtime_error("integrate: maximum number of steps exceeded");
}

RhsFn make_rhs(const PhysParams& params, const FieldModel& field) {
    return [&params, &field](double t, const Vec2& y) -> Vec2 {
        if (!(y[0] > 0.0)) throw StepReject{};
        const auto d = vector_field(t, RadialState{y[0], y[1]}, params, field);
        return {d.dr_dt, d.dpr_dt};
    };
}

void check_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw std::invalid_argument("integrate: tol must lie in [1e-13, 1e-6]");
}

}  // namespace

Vec2 DenseSolution::Segment::eval(double t) const {
    const double h = t_right - t_left;
    const double s = (t - t_left) / h;
    const double s1 = 1.0 - s;
    Vec2 out;
    for (int i = 0; i < 2; ++i) {
        const double a6 = coef[6][i] + s * coef[7][i];
        const double a5 = coef[5][i] + s1 * a6;
        const double a4 = coef[4][i] + s * a5;
        const double a3 = coef[3][i] + s1 * a4;
        const double a2 = coef[2][i] + s * a3;
        const double a1 = coef[1][i] + s1 * a2;
        out[i] = coef[0][i] + s * a1;
    }
    return out;
}

Vec2 DenseSolution::Segment::eval_deriv(double t) const {
    const double h = t_right - t_left;
    const double s = (t - t_left) / h;
    const double s1 = 1.0 - s;
    Vec2 out;
    for (int i = 0; i < 2; ++i) {
        const double a6 = coef[6][i] + s * coef[7][i];
        const double a5 = coef[5][i] + s1 * a6;
        const double a4 = coef[4][i] + s * a5;
        const double a3 = coef[3][i] + s1 * a4;
        const double a2 = coef[2][i] + s * a3;
        const double a1 = coef[1][i] + s1 * a2;
        out[i] = (a1 - s * (a2 - s1 * (a3 - s * (a4 - s1 * (a5 - s * (a6 - s1 * coef[7][i])))))) / h;
    }
    return out;
}

const DenseSolution::Segment& DenseSolution::locate(double t) const {
    if (segments_.empty()) throw std::runtime_error("DenseSolution: empty");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.t_right; });
    if (it == segments_.end()) --it;
    return *it;
}

RadialState DenseSolution::state(double t) const {
    const Vec2 y = locate(t).eval(t);
    return RadialState{y[0], y[1]};
}

Vec2 DenseSolution::derivative(double t) const { return locate(t).eval_deriv(t); }

OrbitSample integrate(const RadialState& initial, double t0, double t1,
                      const PhysParams& params, const FieldModel& field, double tol) {
    check_tol(tol);
    OrbitSample out;
    out.energy = params.k == 0.0 ? hamiltonian(initial, params)
                                 : hamiltonian(t0, initial, params, field);
    out.times.push_back(t0);
    out.states.push_back(initial);
    drive_dop853(make_rhs(params, field), t0, {initial.r, initial.pr}, t1, tol,
                 /*want_dense=*/false, [&](const StepRecord& rec) {
                     out.times.push_back(rec.t_right);
                     out.states.push_back(RadialState{rec.y_right[0], rec.y_right[1]});
                     return true;
                 });
    return out;
}

DenseSolution integrate_dense(const RadialState& initial, double t0, double t1,
                              const PhysParams& params, const FieldModel& field,
                              double tol) {
    check_tol(tol);
    DenseSolution sol;
    sol.set_range(t0, t1);
    drive_dop853(make_rhs(params, field), t0, {initial.r, initial.pr}, t1, tol,
                 /*want_dense=*/true, [&](const StepRecord& rec) {
                     sol.add_segment(DenseSolution::Segment{rec.t_left, rec.t_right, rec.dense});
                     return true;
                 });
    return sol;
}

RadialState flow(const RadialState& initial, double t0, double t1, const PhysParams& params,
                 const FieldModel& field, double tol) {
    check_tol(tol);
    Vec2 y{initial.r, initial.pr};
    drive_dop853(make_rhs(params, field), t0, y, t1, tol, /*want_dense=*/false,
                 [&](const StepRecord& rec) {
                     y = rec.y_right;
                     return true;
                 });
    return RadialState{y[0], y[1]};
}

double return_time(const RadialState& initial, const PhysParams& params, double tol) {
    check_tol(tol);
    if (std::abs(initial.pr) > 1e-14)
        throw std::invalid_argument("return_time: initial state must lie on pr = 0");

    const auto eq = equilibrium(params);
    if (std::abs(initial.r - eq.r_bar) <= 1e-12 * eq.r_bar)
        throw std::invalid_argument("return_time: initial radius equals the equilibrium");

    const auto field = FieldModel::constant_current();
    const auto rhs = make_rhs(params, field);
    const double horizon = 1000.0 * eq.T0_lin;

    const double dir0 = rhs(0.0, {initial.r, 0.0})[1];  // departure sign of dpr/dt
    double found = -1.0;

    drive_dop853(rhs, 0.0, {initial.r, initial.pr}, horizon, tol, /*want_dense=*/true,
                 [&](const StepRecord& rec) {
                     const DenseSolution::Segment seg{rec.t_left, rec.t_right, rec.dense};
                     // scan for sign changes of pr on a fine subgrid
                     constexpr int scan = 8;
                     double ta = rec.t_left;
                     double pa = seg.eval(ta)[1];
                     for (int i = 1; i <= scan; ++i) {
                         const double tb =
                             rec.t_left + (rec.t_right - rec.t_left) * i / double(scan);
                         const double pb = seg.eval(tb)[1];
                         const bool crossing =
                             (pa < 0.0 && pb >= 0.0) || (pa > 0.0 && pb <= 0.0);
                         if (crossing) {
                             double lo = ta, hi = tb;
                             for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi);
                                  ++it) {
                                 const double mid = 0.5 * (lo + hi);
                                 const double pm = seg.eval(mid)[1];
                                 if ((pm > 0.0) == (pb > 0.0)) hi = mid;
                                 else lo = mid;
                             }
                             const double tz = 0.5 * (lo + hi);
                             if (tz > 1e-9 * eq.T0_lin) {
                                 const double slope = seg.eval_deriv(tz)[1];
                                 if (slope * dir0 > 0.0) {
                                     found = tz;
                                     return false;  // full return located
                                 }
                             }
                         }
                         ta = tb;
                         pa = pb;
                     }
                     return true;
                 });

    if (found < 0.0)
        throw std::runtime_error("return_time: no return to the section within 1000 "
                                 "linearized periods (parameter pathology?)");
    return found;
}

}  // namespace wireorbit

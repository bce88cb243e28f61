// Generates data/maass_spectral.csv, the bundled spectral fixture.
//
// The first ten kappa values are the published eigenvalue parameters of the
// first Maass cusp forms for the full modular group (Hejhal/Then-style
// computations, 6 decimal places). Beyond those, eigenvalues are synthesized
// from the Weyl counting law N(K) = K^2/12 - (2K/pi)(log(K/(2 pi)) - 1) + c0,
// with c0 calibrated so N matches the real count at the tenth eigenvalue,
// by solving N(kappa_j) = j for j = 11, 12, ... up to kappa ~ 180.
//
// Weights are synthetic throughout (no published weight table is bundled):
// w(kappa) = 2 kappa / (pi^2 rho(kappa)) * (1 + 0.3 sin(kappa/20)), where
// rho = N' is the Weyl density. Summed against the spectral density this
// makes S(K) = sum_{kappa <= K} w grow like K^2/pi^2, a smooth realization
// of the quadratic partial-sum law the consumers check against. The values
// are NOT Hecke data; they are a structurally honest stand-in.

#include <cmath>
#include <cstdio>
#include <vector>

namespace {

constexpr double kPi = 3.14159265358979323846;

double weyl_raw(double k) {
    return k * k / 12.0 - (2.0 * k / kPi) * (std::log(k / (2.0 * kPi)) - 1.0);
}

double weyl_density(double k) {
    return k / 6.0 - (2.0 / kPi) * std::log(k / (2.0 * kPi));
}

double weight_model(double k) {
    return 2.0 * k / (kPi * kPi * weyl_density(k)) *
           (1.0 + 0.3 * std::sin(k / 20.0));
}

}  // namespace

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : "data/maass_spectral.csv";

    const std::vector<double> real_kappas = {
        9.533695,  12.173008, 13.779751, 14.358510, 16.138073,
        16.644426, 17.738563, 18.180918, 19.423481, 19.484714,
    };

    std::vector<double> kappas = real_kappas;
    const double c0 = 10.0 - weyl_raw(real_kappas.back());
    double k = real_kappas.back();
    for (int j = 11; ; ++j) {
        // Newton solve weyl_raw(k) + c0 = j, warm-started from the previous
        // eigenvalue plus one mean spacing.
        k += 1.0 / weyl_density(k);
        for (int it = 0; it < 40; ++it) {
            double f = weyl_raw(k) + c0 - j;
            double step = f / weyl_density(k);
            k -= step;
            if (std::fabs(step) < 1e-12) break;
        }
        if (k > 180.0) break;
        kappas.push_back(k);
    }

    std::FILE* out = std::fopen(path, "w");
    if (!out) {
        std::fprintf(stderr, "cannot open %s for writing\n", path);
        return 1;
    }
    std::fprintf(out,
                 "# Maass cusp form spectral fixture (kappa,weight)\n"
                 "# kappa 1..10: published eigenvalue parameters for the full "
                 "modular group\n"
                 "# kappa 11..: synthetic continuation from the Weyl counting "
                 "law, calibrated\n"
                 "#   so the count matches the real data at kappa_10\n"
                 "# weights: synthetic smooth model 2k/(pi^2 rho(k)) "
                 "(1 + 0.3 sin(k/20)),\n"
                 "#   realizing quadratic partial-sum growth; NOT Hecke data\n"
                 "# regenerate: make_spectral_table [path]\n");
    for (double kap : kappas)
        std::fprintf(out, "%.9f,%.9e\n", kap, weight_model(kap));
    std::fclose(out);
    std::fprintf(stderr, "wrote %zu records to %s\n", kappas.size(), path);
    return 0;
}

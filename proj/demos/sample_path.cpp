// Draws one realization of the dense random wavelet series and prints it as
// x,y lines, ready for gnuplot. Optional arguments: seed, J_max.
//
//   ./demo_sample_path 7 8 > path.csv

#include <cstdlib>
#include <iostream>

#include "rws/analysis.hpp"
#include "rws/wavelets.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;
    int J_max = argc > 2 ? std::atoi(argv[2]) : 8;

    rws::PriorSpec prior;
    prior.alpha = -1.0;
    prior.beta = -1.0;
    prior.gamma = -1.0;

    const double xmin = -10.0, xmax = 10.0;
    const int points = 1001;
    const int N = 6;

    // Caps wide enough that every basis function meeting the plot window is
    // stored; the default sampling caps only cover the dyadic cube.
    std::vector<std::int64_t> caps;
    for (int j = 0; j <= J_max; ++j) {
        double argscale = j == 0 ? 1.0 : rws::pow2(j - 1);
        caps.push_back(static_cast<std::int64_t>(xmax * argscale) + 2 * N);
    }

    rws::WaveletSystem sys = rws::cascade(rws::scaling_filter(N), 10, 1, N);
    rws::CoefficientField field = rws::sample_field(prior, 1, J_max, caps, seed);

    std::vector<std::vector<double>> grid;
    for (int i = 0; i < points; ++i)
        grid.push_back({xmin + (xmax - xmin) * double(i) / (points - 1)});
    std::vector<double> y = rws::synthesize(sys, field, grid);

    field.manifest().emit(std::cout);
    for (int i = 0; i < points; ++i)
        std::cout << rws::format_number(grid[i][0]) << "," << rws::format_number(y[i]) << "\n";
    return 0;
}

// Sweeps the scale exponent alpha across the convergence boundary
// s + d/2 + alpha = 0 and prints the phase verdict next to the exact
// predicate, one line per alpha. With s = 0 and d = 1 the boundary sits at
// alpha = -1/2; the classifier should flip from convergent to divergent there.

#include <cstdlib>
#include <iostream>

#include "rws/analysis.hpp"
#include "rws/conditions.hpp"

int main(int argc, char** argv) {
    int trials = argc > 1 ? std::atoi(argv[1]) : 30;

    rws::SpaceSpec space;  // d=1, s=0, p=q=2, unweighted
    std::vector<int> J_list{4, 5, 6, 7, 8, 9, 10};

    std::cout << "alpha,predicate,classification,median_slope\n";
    for (double alpha : {-1.0, -0.75, -0.55, -0.5, -0.45, -0.25, 0.0}) {
        rws::PriorSpec prior;
        prior.alpha = alpha;
        prior.beta = -1.5;
        prior.gamma = -1.5;

        rws::PropertyVerdict a = rws::property_a(space, prior);
        rws::PhaseVerdict v = rws::phase_classify(prior, space, J_list, trials, 1);
        std::cout << alpha << "," << (a.holds ? "A-holds" : "A-fails") << ","
                  << rws::to_string(v.classification) << "," << rws::format_number(v.slope)
                  << "\n";
    }
    return 0;
}

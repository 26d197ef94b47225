// Prints the regularised period of the blow-up of P^N in a complete
// intersection given on the command line:  sample_period N c1 c2 ... [--dmax D]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "qperiod/qperiod.hpp"

int main(int argc, char** argv)
{
    using namespace qperiod;
    if (argc < 4) {
        std::cerr << "usage: sample_period N c1 c2 ... [--dmax D]\n";
        return 2;
    }
    BlowUpSpec spec{std::atoi(argv[1]), {}};
    long dmax = 10;
    for (int i = 2; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--dmax" && i + 1 < argc)
            dmax = std::atol(argv[++i]);
        else
            spec.center_degrees.push_back(std::atoi(argv[i]));
    }
    try {
        auto p = period_series(blowup_model(spec), dmax);
        std::cout << format_table(p);
        if (p.correction.total() != 0)
            std::cout << "C = " << to_string(p.correction.total()) << "\n";
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

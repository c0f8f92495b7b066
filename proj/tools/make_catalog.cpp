#include <fstream>
#include <iostream>

#include "superint/catalog/catalog.hpp"

int main(int argc, char** argv) {
    using namespace superint::catalog;
    std::string out = argc > 1 ? argv[1] : default_path();
    Catalog c = build();
    int bad = 0;
    for (const auto& e : c.entries()) {
        auto r = check_entry(e);
        if (!r.verified) {
            ++bad;
            std::cerr << to_json(r).dump(2) << "\n";
        }
    }
    for (const auto& i : c.identifications()) {
        auto r = check_identification(c, i);
        if (!r.ok) {
            ++bad;
            std::cerr << r.name << ": " << r.detail << "\n";
        }
    }
    std::ofstream(out) << c.to_json().dump(1) << "\n";
    std::cout << c.entries().size() << " entries written to " << out << ", " << bad << " failing\n";
    return bad ? 1 : 0;
}

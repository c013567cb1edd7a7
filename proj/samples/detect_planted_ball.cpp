// Plants a radius-4 ball on a 30x30 grid and runs the three detectors on it.
#include <iostream>

#include "locattr/locattr.hpp"

int main() {
    using namespace locattr;
    const auto g = grid_graph(30, 30);
    const auto head = random_head(g, 1);
    const auto model = planted_ball(g, 4, 0.8, 0.1, 7, head);
    const auto y = draw_h1(g, model);

    const auto w = detect_wavelet(g, y, 0.05);
    std::cout << "wavelet  stat=" << w.statistic << " threshold=" << w.threshold << " reject=" << w.reject << '\n';

    ScanConfig cfg;
    cfg.rho = total_variation(g, Attribute::indicator(model.c, g.num_nodes()), Norm::l1);
    for (auto variant : {ScanVariant::lgss, ScanVariant::cgss}) {
        const auto r = scan(variant, g, y, cfg);
        std::cout << to_string(variant) << "     stat=" << r.statistic << " threshold=" << r.threshold
                  << " p<=" << r.p_value_bound << " t=" << r.solution.t << '\n';
    }
}

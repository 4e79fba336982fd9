#include <catch2/catch_amalgamated.hpp>

#include "negmu/errors.hpp"
#include "negmu/output.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

using namespace negmu;

namespace {

FieldMap uniform_map(std::size_t nx, std::size_t ny, double re) {
    FieldMap m;
    m.grid = {-1.0, 1.0, -2.0, 2.0, nx, ny};
    for (std::size_t i = 0; i < nx; ++i) m.xs.push_back(m.grid.x_at(i));
    for (std::size_t j = 0; j < ny; ++j) m.ys.push_back(m.grid.y_at(j));
    m.values.assign(nx * ny, cplx{re, 0.25});
    m.flags.assign(nx * ny, PointFlag::ok);
    return m;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

SimulationConfig small_config(std::size_t n) {
    SimulationConfig c;
    c.drive.delta_p = -2.5;
    c.drive.delta_c = 6.3;
    c.grid = GridSpec::centered(c.drive.wavelength, n);
    return c;
}

} // namespace

TEST_CASE("scientific formatting", "[output]") {
    CHECK(format_sci(1.0) == "1.000000000e0");
    CHECK(format_sci(-2.5e-6) == "-2.500000000e-6");
    CHECK(format_sci(0.0) == "0.000000000e0");
    CHECK(format_sci(-0.0) == "0.000000000e0");
    CHECK(format_sci(12345.678) == "1.234567800e4");
    CHECK(format_sci(6.6e-230) == "6.600000000e-230");
    CHECK(format_sci(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv layout", "[output]") {
    const auto cfg = small_config(2);
    const FieldMap m = scan_grid(cfg.grid, cfg.drive, cfg.rates, cfg.medium);
    const std::string csv = write_map_csv(m);
    CHECK(count_lines(csv) == 5);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.rfind("x,y,re_mu,im_mu,flag\n", 0) == 0);
    // y outer, x inner
    CHECK(csv.find("\n-2.000000000e-6,-2.000000000e-6,") < csv.find("\n2.000000000e-6,-2.000000000e-6,"));
    CHECK(csv.find("\n2.000000000e-6,-2.000000000e-6,") < csv.find("\n-2.000000000e-6,2.000000000e-6,"));
}

TEST_CASE("vacuum medium prints unit permeability", "[output]") {
    auto cfg = small_config(3);
    cfg.medium.density_n = 0.0;
    const FieldMap m = scan_grid(cfg.grid, cfg.drive, cfg.rates, cfg.medium);
    const std::string csv = write_map_csv(m);
    const FieldMap back = parse_map_csv(csv);
    REQUIRE(back.values.size() == 9);
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
        const std::size_t end = csv.find('\n', pos);
        const std::string line = csv.substr(pos, end - pos);
        CHECK(line.find(",1.000000000e0,0.000000000e0,ok") != std::string::npos);
        pos = end + 1;
    }
}

TEST_CASE("csv re-serialization is byte identical", "[output][property]") {
    auto cfg = small_config(11);
    FieldMap m = scan_grid(cfg.grid, cfg.drive, cfg.rates, cfg.medium);
    m.flags[7] = PointFlag::singular;
    m.values[7] = {std::nan(""), std::nan("")};
    const std::string csv = write_map_csv(m);
    const FieldMap back = parse_map_csv(csv);
    CHECK(back.grid.nx == 11);
    CHECK(back.grid.ny == 11);
    CHECK(back.flags[7] == PointFlag::singular);
    CHECK(write_map_csv(back) == csv);

    CHECK_THROWS_AS(parse_map_csv("a,b\n"), ParseError);
    CHECK_THROWS_AS(parse_map_csv("x,y,re_mu,im_mu,flag\n1,2,3,4,maybe\n"), ParseError);
    CHECK_THROWS_AS(parse_map_csv("x,y,re_mu,im_mu,flag\n1,2,3\n"), ParseError);
}

TEST_CASE("json dump", "[output]") {
    const auto cfg = small_config(2);
    FieldMap m = scan_grid(cfg.grid, cfg.drive, cfg.rates, cfg.medium);
    const std::string a = write_map_json(m, cfg);
    CHECK(a == write_map_json(scan_grid(cfg.grid, cfg.drive, cfg.rates, cfg.medium), cfg));
    CHECK(a.rfind("{\"config\":{\"description\":", 0) == 0);
    const auto j = nlohmann::json::parse(a);
    CHECK(j["values"].size() == 4);
    CHECK(j["flags"].size() == 4);
    CHECK(j["grid"]["nx"] == 2);
    CHECK(j["config"]["drive"]["delta_p"] == -2.5);
    CHECK(j["values"][0][0].get<double>() == m.values[0].real());
    CHECK(a.find("\"grid\"") < a.find("\"values\""));
    CHECK(a.find("\"values\"") < a.find("\"flags\""));

    m.flags[1] = PointFlag::singular;
    const auto js = nlohmann::json::parse(write_map_json(m, cfg));
    CHECK(js["values"][1][0].is_null());
    CHECK(js["flags"][1] == "singular");
}

TEST_CASE("heatmap colormap", "[output]") {
    const HeatmapStyle s{-2.0, 2.0};
    CHECK(heatmap_color(-2.0, s) == Rgb{0, 0, 255});
    CHECK(heatmap_color(-9.0, s) == Rgb{0, 0, 255});
    CHECK(heatmap_color(0.0, s) == Rgb{255, 255, 255});
    CHECK(heatmap_color(2.0, s) == Rgb{255, 0, 0});
    CHECK(heatmap_color(-1.0, s) == Rgb{128, 128, 255});  // 127.5 rounds up
    CHECK(heatmap_color(1.0, s) == Rgb{255, 128, 128});
    CHECK(heatmap_color(std::nan(""), s) == Rgb{0, 0, 0});
}

TEST_CASE("ppm image", "[output]") {
    const HeatmapStyle s{-3.0, 1.0};
    const std::string header = "P6\n4 3\n255\n";

    std::string img = render_heatmap_ppm(uniform_map(4, 3, -3.0), s);
    REQUIRE(img.size() == header.size() + 36);
    CHECK(img.compare(0, header.size(), header) == 0);
    for (std::size_t p = header.size(); p < img.size(); p += 3) {
        REQUIRE(static_cast<unsigned char>(img[p]) == 0);
        REQUIRE(static_cast<unsigned char>(img[p + 1]) == 0);
        REQUIRE(static_cast<unsigned char>(img[p + 2]) == 255);
    }

    img = render_heatmap_ppm(uniform_map(4, 3, -1.0), s);
    for (std::size_t p = header.size(); p < img.size(); ++p) REQUIRE(static_cast<unsigned char>(img[p]) == 255);

    FieldMap one = uniform_map(4, 3, -1.0);
    one.flags[one.index(1, 0)] = PointFlag::singular;
    img = render_heatmap_ppm(one, s);
    std::size_t black = 0, black_at = 0;
    for (std::size_t p = header.size(); p < img.size(); p += 3) {
        if (img[p] == 0 && img[p + 1] == 0 && img[p + 2] == 0) {
            ++black;
            black_at = (p - header.size()) / 3;
        }
    }
    CHECK(black == 1);
    // (i=1, j=0) is on the bottom image row
    CHECK(black_at == 2 * 4 + 1);

    // top row is y_max
    FieldMap grad = uniform_map(2, 2, 0.0);
    grad.values = {cplx{-3.0, 0}, cplx{-3.0, 0}, cplx{1.0, 0}, cplx{1.0, 0}};
    img = render_heatmap_ppm(grad, s);
    const std::size_t h = std::string("P6\n2 2\n255\n").size();
    CHECK(static_cast<unsigned char>(img[h]) == 255);
    CHECK(static_cast<unsigned char>(img[h + 1]) == 0);
    CHECK(static_cast<unsigned char>(img[h + 6 + 2]) == 255);

    CHECK_THROWS_AS(render_heatmap_ppm(grad, HeatmapStyle{1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("sweep table", "[output]") {
    SweepRow r;
    r.detuning = -2.5;
    r.min_re_mu = -7.4;
    r.kind = ExtremumKind::crater;
    r.quadrants = {Quadrant::III, Quadrant::I};
    r.regions = 2;
    r.threshold = -3.7;
    const std::string t = write_sweep_csv(SweepAxis::probe, {r});
    CHECK(t == "delta_p,min_re_mu,kind,quadrants,regions,singular_points,threshold\n"
               "-2.500000000e0,-7.400000000e0,crater,III;I,2,0,-3.700000000e0\n");
    CHECK(write_sweep_csv(SweepAxis::coupling, {}).rfind("delta_c,", 0) == 0);
}

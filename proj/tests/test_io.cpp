#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>

#include "hsld/heatmap.hpp"
#include "hsld/matrix_io.hpp"
#include "hsld/rng.hpp"
#include "hsld/standardize.hpp"

using namespace hsld;

TEST_CASE("matrix file layout") {
    Matrix m(1, 1);
    m(0, 0) = 42.0;
    const auto bytes = write_matrix(m);
    REQUIRE(bytes.size() == 12 + 8);  // magic + dims, then one binary64
    REQUIRE(bytes.substr(0, 4) == "HSL1");
    REQUIRE((unsigned char)bytes[4] == 1);   // rows, little-endian
    REQUIRE((unsigned char)bytes[8] == 1);   // cols
    const auto back = read_matrix(bytes);
    REQUIRE(back.rows() == 1);
    REQUIRE(back.cols() == 1);
    REQUIRE(back(0, 0) == 42.0);
}

TEST_CASE("matrix round-trip is bit-exact") {
    Rng rng(3);
    Matrix m(200, 200);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = rng.u01() * 1e6 - 5e5 + rng.u01() * 1e-9;
    const auto back = read_matrix(write_matrix(m));
    REQUIRE(back == m);

    const auto dir = std::filesystem::temp_directory_path() / "hsld_io_test";
    std::filesystem::create_directories(dir);
    write_matrix_file(m, dir / "f.hsld");
    REQUIRE(read_matrix_file(dir / "f.hsld") == m);
    std::filesystem::remove_all(dir);
}

TEST_CASE("matrix read rejects malformed bytes") {
    Matrix m(2, 3, 1.5);
    auto good = write_matrix(m);

    auto bad_magic = good;
    bad_magic[0] = 'X';
    REQUIRE_THROWS_AS(read_matrix(bad_magic), IoError);

    REQUIRE_THROWS_AS(read_matrix(good.substr(0, 10)), IoError);          // truncated header
    REQUIRE_THROWS_AS(read_matrix(good.substr(0, good.size() - 1)), IoError);  // payload short
    REQUIRE_THROWS_AS(read_matrix(good + "x"), IoError);                  // trailing data

    // dimension overflow: rows*cols too large for any real payload
    std::string huge = "HSL1";
    for (int i = 0; i < 8; ++i) huge.push_back((char)0xff);
    REQUIRE_THROWS_AS(read_matrix(huge), IoError);

    Matrix nan_m(1, 1);
    nan_m(0, 0) = std::nan("");
    REQUIRE_THROWS_AS(write_matrix(nan_m), DomainError);
}

TEST_CASE("standardization constants and identities") {
    const auto c1 = standardization_for_case(1);
    const auto c2 = standardization_for_case(2);
    const auto c3 = standardization_for_case(3);
    REQUIRE(c1.x_std == 1000.0);
    REQUIRE(c1.y_mean == 298.0);
    REQUIRE(c1.y_std == 50.0);
    REQUIRE(c2.y_std == 50.0);
    REQUIRE(c3.y_std == 100.0);
    REQUIRE_THROWS_AS(standardization_for_case(4), DomainError);

    Matrix x(1, 3);
    x(0, 0) = 4000;
    x(0, 1) = 0;
    x(0, 2) = 20000;
    const auto xs = standardize_input(x, c1);
    REQUIRE(xs(0, 0) == 4.0);
    REQUIRE(xs(0, 1) == 0.0);
    REQUIRE(xs(0, 2) == 20.0);

    Matrix y(1, 2);
    y(0, 0) = 298;
    y(0, 1) = 348;
    REQUIRE(standardize_label(y, c1)(0, 0) == 0.0);
    REQUIRE(standardize_label(y, c1)(0, 1) == 1.0);
    REQUIRE(standardize_label(y, c3)(0, 1) == 0.5);

    Rng rng(8);
    Matrix f(37, 19);
    for (std::size_t i = 0; i < f.size(); ++i) f.data()[i] = 250 + 200 * rng.u01();
    const auto round = unstandardize_label(standardize_label(f, c3), c3);
    for (std::size_t i = 0; i < f.size(); ++i)
        REQUIRE(round.data()[i] == Catch::Approx(f.data()[i]).epsilon(1e-14));
    const auto round_x = unstandardize_input(standardize_input(f, c1), c1);
    for (std::size_t i = 0; i < f.size(); ++i)
        REQUIRE(round_x.data()[i] == Catch::Approx(f.data()[i]).epsilon(1e-14));
}

TEST_CASE("heatmap format and ramp") {
    Matrix m(200, 200, 1.0);
    const auto constant = render_heatmap(m);
    const std::string header = "P6\n200 200\n255\n";
    REQUIRE(constant.substr(0, header.size()) == header);
    REQUIRE(constant.size() == header.size() + 3 * 200 * 200);
    // constant field: uniform mid-ramp green
    for (std::size_t i = header.size(); i + 2 < constant.size(); i += 3) {
        REQUIRE((unsigned char)constant[i] == 0);
        REQUIRE((unsigned char)constant[i + 1] == 255);
        REQUIRE((unsigned char)constant[i + 2] == 0);
    }

    // 1x5 field hitting every ramp stop
    Matrix line(1, 5);
    for (int c = 0; c < 5; ++c) line(0, c) = c;
    const auto img = render_heatmap(line);
    const unsigned char stops[5][3] = {
        {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}};
    const std::size_t off = std::string("P6\n5 1\n255\n").size();
    for (int c = 0; c < 5; ++c)
        for (int ch = 0; ch < 3; ++ch)
            REQUIRE((unsigned char)img[off + 3 * c + ch] == stops[c][ch]);

    // display flip: image row 0 is the top of the domain
    Matrix two(2, 1);
    two(0, 0) = 0.0;  // bottom of domain, cold -> blue
    two(1, 0) = 1.0;  // top of domain, hot -> red
    const auto flipped = render_heatmap(two);
    const std::size_t o2 = std::string("P6\n1 2\n255\n").size();
    REQUIRE((unsigned char)flipped[o2 + 0] == 255);  // first image row: red
    REQUIRE((unsigned char)flipped[o2 + 2] == 0);
    REQUIRE((unsigned char)flipped[o2 + 3] == 0);    // second image row: blue
    REQUIRE((unsigned char)flipped[o2 + 5] == 255);
}

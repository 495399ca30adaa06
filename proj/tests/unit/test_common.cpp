#include <doctest.h>

#include "voltaic/common/csv.hpp"
#include "voltaic/common/parallel.hpp"
#include "voltaic/common/strings.hpp"

#include <atomic>
#include <cstring>
#include <random>
#include <stdexcept>

using namespace voltaic;

TEST_CASE("csv: quoting, trimming, parenthesised commas")
{
    auto rows = parse_csv("run, c_i_sto_e(n,'Li-ion') ,\"a,b\"\n\nS0,20029,\"say \"\"hi\"\"\"\r\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == CsvRow{"run", "c_i_sto_e(n,'Li-ion')", "a,b"});
    CHECK(rows[1] == CsvRow{"S0", "20029", "say \"hi\""});
    CHECK(csv_line({"a,b", "c"}) == "\"a,b\",c\n");
    CHECK(parse_csv(csv_line({"x\"y", "", "z"}))[0] == CsvRow{"x\"y", "", "z"});
}

TEST_CASE("numbers: plain decimal only")
{
    CHECK(parse_number("1.5") == 1.5);
    CHECK(parse_number("-3e2") == -300.0);
    CHECK(parse_number(" 7 ") == 7.0);
    CHECK_FALSE(parse_number("1,5"));
    CHECK_FALSE(parse_number("12abc"));
    CHECK_FALSE(parse_number(""));
    CHECK_FALSE(parse_number("nan"));
    CHECK_FALSE(parse_number("inf"));
}

TEST_CASE("format_exact round-trips every double")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t bits = rng();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) {
            continue;
        }
        auto text = format_exact(v);
        auto back = parse_number(text);
        REQUIRE(back);
        CHECK(*back == v);
    }
    CHECK(format_exact(-0.0) == "0");
    CHECK(format_exact(0.1) == "0.1");
    CHECK(format_exact(1400) == "1400");
    CHECK(format_significant(2.0 / 3.0, 6) == "0.666667");
}

TEST_CASE("yes/no and hour labels")
{
    CHECK(parse_yes_no("YES") == true);
    CHECK(parse_yes_no("no") == false);
    CHECK(parse_yes_no("True") == true);
    CHECK(parse_yes_no("0") == false);
    CHECK_FALSE(parse_yes_no("maybe"));
    CHECK(hour_label(1) == "h1");
    CHECK(hour_label(8760) == "h8760");
    CHECK(split("a;b;;c", ';') == std::vector<std::string>{"a", "b", "", "c"});
}

TEST_CASE("round-robin partition covers every index once")
{
    for (std::size_t threads : {1u, 2u, 3u, 8u}) {
        std::vector<int> hits(23, 0);
        std::vector<std::size_t> owner(23);
        std::atomic<int> inits{0};
        for_each_index_partitioned(
            hits.size(), threads,
            [&](std::size_t w) {
                ++inits;
                return w;
            },
            [&](std::size_t& w, std::size_t i) {
                ++hits[i];
                owner[i] = w;
            });
        for (int h : hits) {
            CHECK(h == 1);
        }
        const std::size_t workers = std::min<std::size_t>(threads, hits.size());
        CHECK(inits.load() == static_cast<int>(workers));
        for (std::size_t i = 0; i < hits.size(); ++i) {
            CHECK(owner[i] == i % workers);
        }
    }
    CHECK_THROWS_AS(for_each_index(5, 2,
                                   [](std::size_t i) {
                                       if (i == 3) {
                                           throw std::runtime_error("boom");
                                       }
                                   }),
                    std::runtime_error);
}

#include "tedm/csv.hpp"
#include "tedm/error.hpp"
#include "tedm/quantity.hpp"

#include <doctest.h>

using namespace tedm;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("parse_quantity forms") {
    CHECK(parse_quantity("123") == 123);
    CHECK(parse_quantity("-0.25") == Quantity(-1, 4));
    CHECK(parse_quantity("1.5e3") == 1500);
    CHECK(parse_quantity("2.5E-2") == Quantity(1, 40));
    CHECK(parse_quantity("7/3") == Quantity(7, 3));
    CHECK(parse_quantity("09") == 9);
    CHECK(parse_quantity("010/04") == Quantity(5, 2));
    CHECK(parse_quantity("0.000001") == Quantity(1, 1000000));
    CHECK(parse_quantity("3030303031") == Quantity(3030303031LL));
}

TEST_CASE("parse_quantity rejects malformed text") {
    // surrounding whitespace is padding from hand-edited CSV, not an error
    CHECK(parse_quantity(" 5\t") == 5);
    for (const char* bad : {"", "abc", "1.2.3", "1/0", "--1", "1e", "0x10", "1 5", "5%"})
        CHECK_MESSAGE(code_of([&] { parse_quantity(bad); }) == ErrorCode::InvalidArgument, bad);
}

TEST_CASE("decimal rendering") {
    CHECK(to_decimal_string(Quantity(1, 8)) == "0.125");
    CHECK(to_decimal_string(Quantity(-5, 2)) == "-2.5");
    CHECK(to_decimal_string(Quantity(1, 3), 4) == "0.3333");
    CHECK(to_decimal_string(Quantity(2, 3), 4) == "0.6667");
    CHECK(to_decimal_string(Quantity(100)) == "100");
    CHECK(to_fixed_string(Quantity(3030303031LL, 1000000000), 2) == "3.03");
    CHECK(to_fixed_string(Quantity(1, 2), 0) == "1");
}

TEST_CASE("floating point bridges are exact where promised") {
    for (double v : {0.1, 1e-9, 12345.678, 0.0, -3.5}) CHECK(to_double(from_double(v)) == v);
    CHECK(from_double(0.5) == Quantity(1, 2));
    CHECK(floor_to_unit(parse_quantity("1.2345679"), Quantity(1, 1000000)) == parse_quantity("1.234567"));
    CHECK(floor_to_unit(Quantity(5), Quantity(2)) == 4);
    CHECK(round_places(0.12345649) == 0.123456);
}

TEST_CASE("csv parsing") {
    auto t = csv::parse("\xEF\xBB\xBF" "a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\r\n1,2\n");
    REQUIRE(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == "x, y");
    CHECK(t.rows[0][1] == "say \"hi\"");
    CHECK(t.line_numbers[1] == 4);
    CHECK(t.column("b") == 1);
    CHECK(t.column("c") == std::string::npos);
    CHECK(code_of([] { csv::parse("a,b\n1\n"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { csv::parse("a\n\"open\n"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { csv::parse("a\n\"x\"y\n"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { csv::parse("a\nx\"y\"\n"); }) == ErrorCode::SchemaError);
    CHECK(csv::parse("a,b\n \"q\" ,2\n").rows[0][0] == "q");
    CHECK(code_of([] { csv::read_file("/nonexistent/file.csv"); }) == ErrorCode::IoError);
    CHECK(csv::escape_cell("a,b") == "\"a,b\"");
    CHECK(csv::escape_cell("plain") == "plain");
}

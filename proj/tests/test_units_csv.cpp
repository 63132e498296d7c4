#include <stdexcept>

#include "doctest.h"

#include "tpadlab/csv.hpp"
#include "tpadlab/units.hpp"

using namespace tpadlab;
using units::Dimension;

TEST_CASE("unit suffixes convert to SI") {
    CHECK(units::parse_quantity("0.4mm", Dimension::Length) == doctest::Approx(0.4e-3));
    CHECK(units::parse_quantity("3um", Dimension::Length) == doctest::Approx(3e-6));
    CHECK(units::parse_quantity("3µm", Dimension::Length) == doctest::Approx(3e-6));
    CHECK(units::parse_quantity("2.483g/cm3", Dimension::Density) == doctest::Approx(2483.0));
    CHECK(units::parse_quantity("71kN/mm2", Dimension::Pressure) == doctest::Approx(71e9));
    CHECK(units::parse_quantity("71GPa", Dimension::Pressure) == doctest::Approx(71e9));
    CHECK(units::parse_quantity("9.88nF", Dimension::Capacitance) == doctest::Approx(9.88e-9));
    CHECK(units::parse_quantity("100Ohm", Dimension::Resistance) == doctest::Approx(100.0));
    CHECK(units::parse_quantity("2.15kOhm", Dimension::Resistance) == doctest::Approx(2150.0));
    CHECK(units::parse_quantity("30kHz", Dimension::Frequency) == doctest::Approx(30e3));
    CHECK(units::parse_quantity("50mm/s", Dimension::Velocity) == doctest::Approx(0.05));
    CHECK(units::parse_quantity("40V", Dimension::Voltage) == doctest::Approx(40.0));
}

TEST_CASE("bare numbers are SI") {
    CHECK(units::parse_quantity("30e3", Dimension::Frequency) == 30e3);
    CHECK(units::parse_quantity(" 0.25 ", Dimension::Dimensionless) == 0.25);
}

TEST_CASE("unit errors") {
    CHECK_THROWS_AS(units::parse_quantity("3kg", Dimension::Length), std::invalid_argument);
    CHECK_THROWS_AS(units::parse_quantity("30kHz", Dimension::Length), std::invalid_argument);
    CHECK_THROWS_AS(units::parse_quantity("mm", Dimension::Length), std::invalid_argument);
    CHECK_THROWS_AS(units::parse_quantity("", Dimension::Length), std::invalid_argument);
    CHECK_THROWS_AS(units::parse_quantity("1mm", Dimension::Dimensionless), std::invalid_argument);
}

TEST_CASE("help lists units") {
    const auto len = units::accepted_units(Dimension::Length);
    CHECK(len.find("mm") != std::string::npos);
    CHECK(len.find("um") != std::string::npos);
    CHECK(units::accepted_units(Dimension::Pressure).find("GPa") != std::string::npos);
}

TEST_CASE("CSV helpers") {
    CHECK(csv::format_number(0.1) == "0.1");
    CHECK(csv::format_number(30.924925680002627) == "30.92492568");
    CHECK(csv::format_number(3e-6) == "3e-06");

    const auto cells = csv::split_line(" a , b,c \r");
    REQUIRE(cells.size() == 3);
    CHECK(cells[0] == "a");
    CHECK(cells[2] == "c");
    CHECK(csv::split_line("1,,2").size() == 3);

    double v = 0.0;
    CHECK(csv::parse_number("+1.5e3", v));
    CHECK(v == 1500.0);
    CHECK_FALSE(csv::parse_number("1.5x", v));
    CHECK_FALSE(csv::parse_number("", v));
}

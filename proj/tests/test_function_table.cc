#include "qpv/function_table.h"

#include <cstdio>
#include <sstream>

#include "gtest/gtest.h"

#include "qpv/fgen.h"

using namespace qpv;

TEST(function_table, seeded_test_vectors) {
    struct Vec {
        std::uint64_t seed;
        const char* x;
        const char* y;
        int m;
        const char* z;
    };
    const Vec vectors[] = {
        {0x1, "0", "1", 1, "1"},
        {0x2a, "101", "011", 5, "10101"},
        {0x7, "110010", "001101", 3, "101"},
        {0xdeadbeef, "1111111111111111111111111111111111111111", "0000000000000000000000000000000000000001", 70,
         "0000101001110100100001001010111111001001111010000010101001110001110000"},
    };
    for (const auto& v : vectors) {
        int n = static_cast<int>(std::string(v.x).size());
        auto f = FunctionTable::seeded(n, v.m, v.seed);
        EXPECT_EQ(f(BitString::parse(v.x), BitString::parse(v.y)).to_string(), v.z) << v.seed;
    }
}

TEST(function_table, eval_index_matches_bitstring_eval) {
    auto f = FunctionTable::seeded(5, 7, 99);
    for (std::uint64_t x = 0; x < 32; x += 3) {
        for (std::uint64_t y = 0; y < 32; y += 5) {
            auto z = f(BitString::from_lex_index(x, 5), BitString::from_lex_index(y, 5));
            EXPECT_EQ(f.eval_index(x, y), z.lex_index());
        }
    }
}

TEST(function_table, explicit_and_seeded_agree) {
    auto seeded = FunctionTable::seeded(4, 3, 1234);
    auto table = seeded.materialize();
    EXPECT_FALSE(table.is_seeded());
    for (std::uint64_t x = 0; x < 16; x++) {
        for (std::uint64_t y = 0; y < 16; y++) {
            auto bx = BitString::from_lex_index(x, 4);
            auto by = BitString::from_lex_index(y, 4);
            EXPECT_EQ(seeded(bx, by), table(bx, by));
        }
    }
}

TEST(function_table, named_functions) {
    auto f = FunctionTable::xor_function(2);
    EXPECT_EQ(f(BitString::parse("10"), BitString::parse("11")).to_string(), "01");
    auto g = FunctionTable::select_y(3);
    EXPECT_EQ(g(BitString::parse("101"), BitString::parse("011")).to_string(), "011");
    auto c = FunctionTable::constant(2, BitString::parse("110"));
    EXPECT_EQ(c.m(), 3);
    EXPECT_EQ(c(BitString::parse("01"), BitString::parse("10")).to_string(), "110");
}

TEST(function_table, validation) {
    EXPECT_THROW(FunctionTable::from_table(1, 1, {0, 1, 0}), std::invalid_argument);
    EXPECT_THROW(FunctionTable::from_table(1, 1, {0, 1, 0, 2}), std::invalid_argument);
    EXPECT_THROW(FunctionTable::seeded(13, 1, 0).materialize(), std::invalid_argument);
    EXPECT_THROW(FunctionTable::seeded(0, 1, 0), std::invalid_argument);
    auto f = FunctionTable::xor_function(2);
    EXPECT_THROW(f(BitString::parse("1"), BitString::parse("10")), std::invalid_argument);
}

TEST(function_table, file_round_trip) {
    auto f = sample_function(2, 3, 42);
    std::stringstream ss;
    f.write(ss);
    std::string text = ss.str();
    EXPECT_EQ(text.substr(0, 4), "2 3\n");
    auto g = FunctionTable::read(ss);
    EXPECT_EQ(f.outputs(), g.outputs());

    auto s = FunctionTable::seeded(20, 4, 0xabcdef);
    std::stringstream ss2;
    s.write(ss2);
    EXPECT_EQ(ss2.str(), "20 4\nseeded 0000000000abcdef\n");
    auto t = FunctionTable::read(ss2);
    EXPECT_TRUE(t.is_seeded());
    EXPECT_EQ(t.seed(), 0xabcdefu);
}

TEST(function_table, file_format_lex_order) {
    std::stringstream ss("1 2\n00\n01\n10\n11\n");
    auto f = FunctionTable::read(ss);
    EXPECT_EQ(f(BitString::parse("0"), BitString::parse("1")).to_string(), "01");
    EXPECT_EQ(f(BitString::parse("1"), BitString::parse("0")).to_string(), "10");
}

TEST(function_table, file_errors) {
    std::stringstream bad_header("x y\n");
    EXPECT_THROW(FunctionTable::read(bad_header), std::invalid_argument);
    std::stringstream short_table("1 1\n0\n1\n");
    EXPECT_THROW(FunctionTable::read(short_table), std::invalid_argument);
    std::stringstream wide("1 1\n0\n1\n0\n10\n");
    EXPECT_THROW(FunctionTable::read(wide), std::invalid_argument);
    std::stringstream bad_seed("3 1\nseeded zz\n");
    EXPECT_THROW(FunctionTable::read(bad_seed), std::invalid_argument);
    EXPECT_THROW(FunctionTable::load("/nonexistent/dir/f.txt"), IoError);
}

TEST(function_table, permute_outputs) {
    auto f = sample_function(2, 3, 5);
    auto g = f.permute_outputs({2, 0, 1});
    for (std::uint64_t i = 0; i < 16; i++) {
        auto a = BitString::from_lex_index(f.outputs()[i], 3);
        auto b = BitString::from_lex_index(g.outputs()[i], 3);
        EXPECT_EQ(b[0], a[2]);
        EXPECT_EQ(b[1], a[0]);
        EXPECT_EQ(b[2], a[1]);
    }
    EXPECT_THROW(f.permute_outputs({0, 0, 1}), std::invalid_argument);
}

#include "doctest.h"

#include "chatdom/text.hpp"

using namespace chatdom::text;
using V = std::vector<std::string>;

TEST_CASE("tokenize splits on whitespace and keeps internal apostrophes") {
    CHECK(tokenize("I don't know") == V{"I", "don't", "know"});
    CHECK(tokenize("") == V{});
    CHECK(tokenize("   \t\n ") == V{});
}

TEST_CASE("tokenize strips edge punctuation but keeps leading #") {
    CHECK(tokenize("good point #5!!!") == V{"good", "point", "#5"});
    CHECK(tokenize("(really?) \"yes.\"") == V{"really", "yes"});
    CHECK(tokenize("'tis") == V{"tis"});
}

TEST_CASE("pure punctuation tokens are dropped") {
    CHECK(tokenize("ok :-) !!! ...") == V{"ok"});
    CHECK(tokenize("# @") == V{});
}

TEST_CASE("unicode whitespace separates tokens") {
    CHECK(tokenize("a\xC2\xA0" "b\xE3\x80\x80" "c") == V{"a", "b", "c"});
    // Curly apostrophe stays inside the token.
    CHECK(tokenize("I don\xE2\x80\x99t") == V{"I", "don\xE2\x80\x99t"});
}

TEST_CASE("tokenize never alters case") {
    CHECK(tokenize("ALEX Alex alex") == V{"ALEX", "Alex", "alex"});
}

TEST_CASE("scalar_count counts code points, not bytes") {
    CHECK(scalar_count("why Nali??") == 10);
    CHECK(scalar_count("caf\xC3\xA9") == 4);
    CHECK(scalar_count("\xF0\x9F\x98\x80") == 1);
}

TEST_CASE("utf8 validation") {
    CHECK(is_valid_utf8("plain"));
    CHECK(is_valid_utf8("caf\xC3\xA9"));
    CHECK_FALSE(is_valid_utf8("\xC3"));
    CHECK_FALSE(is_valid_utf8("\xC0\xAF"));      // overlong
    CHECK_FALSE(is_valid_utf8("\xED\xA0\x80"));  // surrogate
    CHECK(encode_utf8(decode_utf8("d\xC3\xA9j\xC3\xA0 \xF0\x9F\x98\x80")) == "d\xC3\xA9j\xC3\xA0 \xF0\x9F\x98\x80");
}

TEST_CASE("fold_case lowers letters and normalizes apostrophes") {
    CHECK(fold_case("I\xE2\x80\x99M") == "i'm");
    CHECK(fold_case("\xC3\x89T\xC3\x89") == "\xC3\xA9t\xC3\xA9");
}

TEST_CASE("format_number uses six significant digits") {
    CHECK(format_number(0.23147521650098238) == "0.231475");
    CHECK(format_number(1122.0) == "1122");
    CHECK(format_number(-0.0) == "0");
}

#include <doctest.h>

#include <random>

#include "legalsearch/text.hpp"
#include "legalsearch/tsv.hpp"
#include "support/temp_dir.hpp"

using namespace legalsearch;

namespace {

std::vector<std::string> texts(const std::vector<SentenceSpan>& spans)
{
    std::vector<std::string> out;
    for (const auto& s : spans) {
        out.push_back(s.text);
    }
    return out;
}

}  // namespace

TEST_CASE("split_sentences on terminal punctuation")
{
    auto spans = split_sentences("The court ruled. The appeal failed.");
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].text == "The court ruled.");
    CHECK(spans[1].text == "The appeal failed.");
    CHECK(spans[1].index == 1);
}

TEST_CASE("abbreviations do not end a sentence")
{
    CHECK(split_sentences("Smith v. Jones was cited.").size() == 1);
    CHECK(split_sentences("See No. 5 of the schedule. It applies.").size() == 2);
    CHECK(split_sentences("Under s. 18 of the Act. Mr. Smith appealed.").size() == 2);
    CHECK(split_sentences("Acme Inc. Brought the claim.").size() == 1);
}

TEST_CASE("sentence boundary needs whitespace then uppercase or digit")
{
    CHECK(split_sentences("It cost 3.5 dollars. then it rose.").size() == 1);
    CHECK(split_sentences("Section 2.1 applies").size() == 1);
    CHECK(split_sentences("Was it granted? 2019 was the year!").size() == 2);
    CHECK(texts(split_sentences("He said \"stop.\" Then he left.")) ==
          std::vector<std::string>{"He said \"stop.\"", "Then he left."});
    CHECK(split_sentences("Wait... What happened?").size() == 2);
    CHECK(split_sentences("The applicant left. (He returned later.)").size() == 2);
}

TEST_CASE("degenerate inputs")
{
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("   \n\t ").empty());
    auto one = split_sentences("  no terminal punctuation here  ");
    REQUIRE(one.size() == 1);
    CHECK(one[0].text == "no terminal punctuation here");
    CHECK(one[0].start == 2);
}

TEST_CASE("uppercase non-ASCII letters start sentences")
{
    CHECK(split_sentences("La cour a statué. Également, l'appel est rejeté.").size() == 2);
}

TEST_CASE("ten known sentences round-trip through their offsets")
{
    std::vector<std::string> known;
    for (int i = 0; i < 10; ++i) {
        known.push_back("Sentence number " + std::to_string(i) + " discusses the matter of item " +
                        std::to_string(i * 7) + (i % 3 == 0 ? "?" : "."));
    }
    const std::vector<std::string> gaps{" ", "  ", "\n", " \n\t"};
    std::string text = "  ";
    for (std::size_t i = 0; i < known.size(); ++i) {
        text += known[i];
        if (i + 1 < known.size()) {
            text += gaps[i % gaps.size()];
        }
    }
    text += "\n";

    auto spans = split_sentences(text);
    REQUIRE(spans.size() == 10);
    for (std::size_t i = 0; i < spans.size(); ++i) {
        CHECK(spans[i].text == known[i]);
        CHECK(text.substr(spans[i].start, spans[i].end - spans[i].start) == spans[i].text);
        if (i > 0) {
            auto gap = text.substr(spans[i - 1].end, spans[i].start - spans[i - 1].end);
            CHECK(gap == gaps[(i - 1) % gaps.size()]);
        }
    }
}

TEST_CASE("splitting is idempotent on produced sentences")
{
    std::mt19937_64 rng(11);
    const std::vector<std::string> pieces{"The", "court", "v.", "No.", "held", "s.", "18(1).", "It", "was",
                                          "Appeal", "dismissed.", "Costs?", "Yes!", "art.", "5", "\"Quote.\"",
                                          "Mr.", "Smith", "e.g.", "the", "Board."};
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        const auto n = 1 + rng() % 30;
        for (std::size_t i = 0; i < n; ++i) {
            text += pieces[rng() % pieces.size()];
            text += (rng() % 5 == 0) ? "\n" : " ";
        }
        for (const auto& span : split_sentences(text)) {
            auto again = split_sentences(span.text);
            REQUIRE(again.size() == 1);
            CHECK(again[0].text == span.text);
        }
    }
}

TEST_CASE("abbreviation list loads from a file")
{
    testing::TempDir dir;
    write_file(dir / "abbr.txt", "# legal\nFoo.\n\n  bar.  \n");
    auto list = AbbreviationList::load(dir / "abbr.txt");
    CHECK(list.size() == 2);
    CHECK(list.contains("foo."));
    CHECK(list.contains("BAR."));
    CHECK_FALSE(list.contains("v."));
    CHECK(split_sentences("Call Foo. Then stop.", list).size() == 1);
    CHECK(split_sentences("Smith v. Jones was cited.", list).size() == 2);
    CHECK_THROWS_AS(AbbreviationList::load(dir / "missing.txt"), Error);
}

TEST_CASE("tokenize_words lowercases alphanumeric runs")
{
    CHECK(tokenize_words("The Court, the COURT").tokens == std::vector<std::string>{"the", "court", "the", "court"});
    CHECK(tokenize_words("").tokens.empty());
    CHECK(tokenize_words("").word_count == 0);
    auto t = tokenize_words("s. 18(1) of the Act");
    CHECK(t.tokens == std::vector<std::string>{"s", "18", "1", "of", "the", "act"});
    CHECK(t.word_count == 6);
    CHECK(tokenize_words("Québec ÉCOLE naïve-Ünal").tokens ==
          std::vector<std::string>{"québec", "école", "naïve", "ünal"});
    CHECK(tokenize_words("a\xff\xfe b").tokens == std::vector<std::string>{"a", "b"});
}

TEST_CASE("tokenize_words distributes over concatenation")
{
    std::mt19937_64 rng(5);
    const std::vector<std::string> alphabet{"a", "B", "z", "7", " ", ".", ",", "(", "é", "Ж", "-", "\n", "'", "Q"};
    auto random_string = [&] {
        std::string s;
        const auto n = rng() % 25;
        for (std::size_t i = 0; i < n; ++i) {
            s += alphabet[rng() % alphabet.size()];
        }
        return s;
    };
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = random_string();
        const auto b = random_string();
        auto joined = tokenize_words(a + " " + b);
        auto expected = tokenize_words(a).tokens;
        auto tail = tokenize_words(b).tokens;
        expected.insert(expected.end(), tail.begin(), tail.end());
        CHECK(joined.tokens == expected);
        CHECK(joined.word_count == joined.tokens.size());
        for (const auto& token : joined.tokens) {
            CHECK_FALSE(token.empty());
        }
    }
}

TEST_CASE("subword estimate doubles the word count")
{
    CHECK(estimate_subword_count(0) == 0);
    CHECK(estimate_subword_count(180) == 360);
    CHECK(estimate_subword_count(255) == 510);
    for (std::size_t w = 0; w < 1000; ++w) {
        CHECK(estimate_subword_count(w + 1) >= estimate_subword_count(w));
    }
}

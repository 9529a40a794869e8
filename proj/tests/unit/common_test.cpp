#include "editwire/common.hpp"

#include <gtest/gtest.h>

using namespace editwire;

TEST(Time, ParsesZuluAndOffsets) {
  auto z = parse_iso8601("2026-05-20T22:41:00Z");
  ASSERT_TRUE(z);
  EXPECT_EQ(format_iso8601(*z), "2026-05-20T22:41:00Z");
  auto plus = parse_iso8601("2026-05-21T00:41:00+02:00");
  ASSERT_TRUE(plus);
  EXPECT_EQ(*plus, *z);
  auto minus = parse_iso8601("2026-05-20T17:41:00-05:00");
  ASSERT_TRUE(minus);
  EXPECT_EQ(*minus, *z);
  auto frac = parse_iso8601("2026-05-20T22:41:00.750Z");
  ASSERT_TRUE(frac);
  EXPECT_EQ(*frac, *z);
  auto spaced = parse_iso8601("2026-05-20 22:41:00Z");
  ASSERT_TRUE(spaced);
  EXPECT_EQ(*spaced, *z);
}

TEST(Time, BareDateIsMidnight) {
  auto d = parse_iso8601("2026-05-20");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_iso8601(*d), "2026-05-20T00:00:00Z");
}

TEST(Time, RejectsGarbage) {
  EXPECT_FALSE(parse_iso8601(""));
  EXPECT_FALSE(parse_iso8601("yesterday"));
  EXPECT_FALSE(parse_iso8601("2026-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_iso8601("2026-02-30T00:00:00Z"));
  EXPECT_FALSE(parse_iso8601("2026-05-20T25:00:00Z"));
}

TEST(Time, Rfc822) {
  auto gmt = parse_rfc822("Wed, 20 May 2026 22:41:00 GMT");
  ASSERT_TRUE(gmt);
  EXPECT_EQ(format_iso8601(*gmt), "2026-05-20T22:41:00Z");
  auto offset = parse_rfc822("Wed, 20 May 2026 23:41:00 +0100");
  ASSERT_TRUE(offset);
  EXPECT_EQ(*offset, *gmt);
  auto no_weekday = parse_rfc822("20 May 2026 17:41:00 CDT");
  ASSERT_TRUE(no_weekday);
  EXPECT_EQ(*no_weekday, *gmt);
  auto two_digit = parse_rfc822("Wed, 20 May 26 17:41:00 EST");
  ASSERT_TRUE(two_digit);
  EXPECT_EQ(format_iso8601(*two_digit), "2026-05-20T22:41:00Z");
  EXPECT_FALSE(parse_rfc822("not a date"));
}

TEST(Time, CompactAndDayHelpers) {
  Instant t = *parse_iso8601("2026-05-20T22:41:07Z");
  EXPECT_EQ(format_compact(t), "20260520T224107Z");
  EXPECT_EQ(format_date(t), "2026-05-20");
  EXPECT_EQ(format_iso8601(start_of_day(t)), "2026-05-20T00:00:00Z");
}

TEST(Strings, Basics) {
  EXPECT_EQ(trim("  a b \n"), "a b");
  EXPECT_EQ(to_lower_ascii("AbC É"), "abc É");
  EXPECT_TRUE(starts_with_ci("Category:Sports", "category:"));
  EXPECT_FALSE(starts_with_ci("Cat", "category:"));
  EXPECT_EQ(utf8_length("council–manager"), 15u);
  EXPECT_EQ(std::string("council–manager").size(), 17u);
  EXPECT_EQ(url_encode("Moore, Oklahoma/é"), "Moore%2C%20Oklahoma%2F%C3%A9");
}

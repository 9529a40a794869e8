#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace editwire {

/// Lowercased word tokens. A token is a maximal run of ASCII letters, digits,
/// apostrophes and non-ASCII bytes; apostrophes are then dropped, so
/// "Don't" becomes "dont".
std::vector<std::string> tokenize(std::string_view text);

/// Bundled English stopword list, shared by the summarizer and the keyword
/// extractor.
const std::set<std::string, std::less<>>& default_stopwords();

/// Splits after '.', '!' or '?' when followed by whitespace or end of text.
/// Sentences are trimmed; empty ones are dropped. No abbreviation handling.
std::vector<std::string> split_sentences(std::string_view text);

/// Removes HTML/XML tags, keeping their inner text.
std::string strip_html_tags(std::string_view html);

/// Decodes the five XML entities plus &nbsp; and numeric references.
std::string decode_html_entities(std::string_view text);

/// Minimal wikitext cleaner: drops <ref> elements, templates, category/file
/// links and emphasis quotes; replaces [[target|label]] by its label and
/// [url label] by the label; strips remaining tags and heading markers;
/// collapses whitespace to single spaces.
std::string clean_wikitext(std::string_view text);

}  // namespace editwire

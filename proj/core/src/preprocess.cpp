#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "mlcal/corpus.hpp"
#include "mlcal/errors.hpp"
#include "utf8.hpp"

namespace mlcal {

namespace detail {
std::string_view default_emoji_table_text();
}

namespace {

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f';
}

std::string_view trim_view(std::string_view s) {
  const auto not_space = [](char c) {
    return !std::isspace(static_cast<unsigned char>(c));
  };
  const auto b = std::find_if(s.begin(), s.end(), not_space);
  const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b))
               : std::string_view{};
}

std::string normalize_emoji_name(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (c == '_' || std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool starts_with_ci(std::u32string_view token, std::u32string_view prefix) {
  if (token.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char32_t c = token[i];
    if (c >= U'A' && c <= U'Z') c += 0x20;
    if (c != prefix[i]) return false;
  }
  return true;
}

bool is_url_token(std::u32string_view token) {
  return starts_with_ci(token, U"http://") || starts_with_ci(token, U"https://") ||
         starts_with_ci(token, U"www.");
}

}  // namespace

bool is_emoji_code_point(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // pictographs, flags, modifiers
         (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
         (cp >= 0x2300 && cp <= 0x23FF) ||    // misc technical (watch, hourglass)
         (cp >= 0x2B00 && cp <= 0x2BFF) ||    // stars, squares, arrows
         (cp >= 0xFE00 && cp <= 0xFE0F) ||    // variation selectors
         (cp >= 0xE0020 && cp <= 0xE007F) ||  // tag sequences
         cp == 0x200D || cp == 0x20E3 || cp == 0x203C || cp == 0x2049;
}

// ---------------------------------------------------------------------------
// EmojiTable

EmojiTable EmojiTable::parse(std::string_view text) {
  EmojiTable table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view trimmed = trim_view(line);
    if (trimmed.empty() || trimmed.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("emoji table line " + std::to_string(line_no) +
                      ": expected <code points><TAB><name>");
    }
    std::u32string key;
    std::istringstream cps{std::string(line.substr(0, tab))};
    std::string cp_text;
    while (cps >> cp_text) {
      if (cp_text.size() < 3 || (cp_text[0] != 'U' && cp_text[0] != 'u') ||
          cp_text[1] != '+') {
        throw DataError("emoji table line " + std::to_string(line_no) +
                        ": bad code point '" + cp_text + "'");
      }
      std::uint32_t value = 0;
      const char* first = cp_text.data() + 2;
      const char* last = cp_text.data() + cp_text.size();
      const auto [ptr, ec] = std::from_chars(first, last, value, 16);
      if (ec != std::errc{} || ptr != last || value > 0x10FFFF) {
        throw DataError("emoji table line " + std::to_string(line_no) +
                        ": bad code point '" + cp_text + "'");
      }
      key.push_back(static_cast<char32_t>(value));
    }
    std::string name = normalize_emoji_name(line.substr(tab + 1));
    if (key.empty() || name.empty()) {
      throw DataError("emoji table line " + std::to_string(line_no) +
                      ": empty code point sequence or name");
    }
    table.max_len_ = std::max(table.max_len_, key.size());
    if (!table.entries_.emplace(std::move(key), std::move(name)).second) {
      throw DataError("emoji table line " + std::to_string(line_no) +
                      ": duplicate code point sequence");
    }
    if (end == text.size()) break;
  }
  return table;
}

EmojiTable EmojiTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open emoji table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const EmojiTable& EmojiTable::builtin() {
  static const EmojiTable table = parse(detail::default_emoji_table_text());
  return table;
}

std::optional<std::pair<std::size_t, std::string_view>> EmojiTable::match(
    std::span<const char32_t> cps, std::size_t pos) const {
  const std::size_t avail = cps.size() - pos;
  for (std::size_t len = std::min(max_len_, avail); len > 0; --len) {
    const std::u32string key(cps.begin() + static_cast<std::ptrdiff_t>(pos),
                             cps.begin() + static_cast<std::ptrdiff_t>(pos + len));
    if (auto it = entries_.find(key); it != entries_.end()) {
      return std::make_pair(len, std::string_view(it->second));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// preprocess / truncate

std::string preprocess(std::string_view raw, const PreprocessConfig& cfg) {
  if (cfg.demojize && cfg.emoji_table_path) {
    return preprocess(raw, cfg, EmojiTable::load(*cfg.emoji_table_path));
  }
  return preprocess(raw, cfg, EmojiTable::builtin());
}

std::string preprocess(std::string_view raw, const PreprocessConfig& cfg,
                       const EmojiTable& emojis) {
  const std::u32string input = utf8::decode(raw);

  std::u32string text;
  text.reserve(input.size());
  if (cfg.demojize) {
    const std::span<const char32_t> cps(input.data(), input.size());
    for (std::size_t i = 0; i < input.size();) {
      if (auto hit = emojis.match(cps, i)) {
        text.push_back(U' ');
        text += utf8::decode(hit->second);
        text.push_back(U' ');
        i += hit->first;
      } else {
        if (!is_emoji_code_point(input[i])) text.push_back(input[i]);
        ++i;
      }
    }
  } else {
    text = input;
  }

  std::u32string out;
  out.reserve(text.size());
  std::u32string token;
  const auto flush = [&] {
    if (token.empty()) return;
    if (cfg.strip_hashtag_symbol) std::erase(token, U'#');
    const bool drop = token.empty() ||
                      (cfg.strip_urls && is_url_token(token)) ||
                      (cfg.strip_mentions && token.front() == U'@');
    if (!drop) {
      if (!out.empty()) out.push_back(U' ');
      for (char32_t c : token) out.push_back(cfg.lowercase ? utf8::to_lower(c) : c);
    }
    token.clear();
  };
  for (char32_t c : text) {
    if (is_space(c)) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return utf8::encode(out);
}

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string truncate(std::string_view text, std::size_t max_tokens) {
  std::string out;
  std::size_t kept = 0;
  for (std::string_view tok : split_tokens(text)) {
    if (kept == max_tokens) break;
    if (kept > 0) out.push_back(' ');
    out.append(tok);
    ++kept;
  }
  return out;
}

}  // namespace mlcal

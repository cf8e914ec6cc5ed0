#include "mcas/state.hpp"

#include <stdexcept>

namespace mcas {

namespace {

bool segments_valid(std::string_view dotted) {
  if (dotted.empty()) return false;
  if (dotted.front() == '.' || dotted.back() == '.') return false;
  for (std::size_t i = 1; i < dotted.size(); ++i) {
    if (dotted[i] == '.' && dotted[i - 1] == '.') return false;
  }
  return true;
}

}  // namespace

PropertyId::PropertyId(std::string dotted) : dotted_(std::move(dotted)) {
  if (!segments_valid(dotted_)) {
    throw std::invalid_argument("invalid property id: '" + dotted_ + "'");
  }
}

std::optional<PropertyId> PropertyId::try_parse(std::string_view dotted) {
  if (!segments_valid(dotted)) return std::nullopt;
  PropertyId id;
  id.dotted_ = std::string(dotted);
  return id;
}

bool PropertyId::valid(std::string_view dotted) { return segments_valid(dotted); }

std::string_view PropertyId::head() const {
  const auto pos = dotted_.find('.');
  return std::string_view(dotted_).substr(0, pos);
}

std::string_view PropertyId::segment(std::size_t i) const {
  std::string_view rest(dotted_);
  for (std::size_t k = 0; k < i; ++k) {
    const auto pos = rest.find('.');
    if (pos == std::string_view::npos) return {};
    rest = rest.substr(pos + 1);
  }
  return rest.substr(0, rest.find('.'));
}

std::size_t PropertyId::segment_count() const {
  if (dotted_.empty()) return 0;
  std::size_t n = 1;
  for (char c : dotted_) n += (c == '.');
  return n;
}

std::vector<std::string_view> PropertyId::segments() const {
  std::vector<std::string_view> out;
  std::string_view rest(dotted_);
  while (!rest.empty()) {
    const auto pos = rest.find('.');
    out.push_back(rest.substr(0, pos));
    if (pos == std::string_view::npos) break;
    rest = rest.substr(pos + 1);
  }
  return out;
}

bool PropertyId::has_prefix(const PropertyId& prefix) const {
  const auto& p = prefix.dotted_;
  return dotted_.size() > p.size() + 1 && dotted_.compare(0, p.size(), p) == 0 &&
         dotted_[p.size()] == '.';
}

PropertyValue PropertyValue::text(std::string s) {
  PropertyValue v;
  v.text_ = std::move(s);
  return v;
}

PropertyValue PropertyValue::absent() {
  PropertyValue v;
  v.text_.reset();
  return v;
}

const std::string* EnvState::find(const PropertyId& id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

void EnvState::set(PropertyId id, std::string value) {
  entries_.insert_or_assign(std::move(id), std::move(value));
}

std::uint64_t EnvState::digest() const {
  std::uint64_t h = kFnvOffsetBasis;
  for (const auto& [id, value] : entries_) {
    h = fnv1a(id.str(), h);
    h = fnv1a("\x1f", h);
    h = fnv1a(value, h);
    h = fnv1a("\x1e", h);
  }
  return h;
}

}  // namespace mcas

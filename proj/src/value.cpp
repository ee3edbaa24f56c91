#include "dinat/value.hpp"

#include <algorithm>

#include "dinat/error.hpp"

namespace dinat {

static const std::vector<Value>& no_items() {
  static const std::vector<Value> empty;
  return empty;
}

Value Value::name(std::string s) {
  Value v;
  v.kind_ = Kind::Name;
  v.name_ = std::move(s);
  return v;
}

Value Value::tuple(std::vector<Value> xs) {
  Value v;
  v.kind_ = Kind::Tuple;
  if (!xs.empty()) v.kids_ = std::make_shared<const std::vector<Value>>(std::move(xs));
  return v;
}

Value Value::inj(Value obj, Value elem) {
  Value v;
  v.kind_ = Kind::Inj;
  v.kids_ = std::make_shared<const std::vector<Value>>(std::vector<Value>{std::move(obj), std::move(elem)});
  return v;
}

Value Value::func(std::vector<Value> outputs) {
  Value v;
  v.kind_ = Kind::Func;
  if (!outputs.empty()) v.kids_ = std::make_shared<const std::vector<Value>>(std::move(outputs));
  return v;
}

const std::vector<Value>& Value::items() const { return kids_ ? *kids_ : no_items(); }

std::strong_ordering Value::operator<=>(const Value& o) const {
  if (kind_ != o.kind_) return kind_ <=> o.kind_;
  if (kind_ == Kind::Name) {
    int c = name_.compare(o.name_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  if (kids_ == o.kids_) return std::strong_ordering::equal;
  const auto& a = items();
  const auto& b = o.items();
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    auto c = a[i] <=> b[i];
    if (c != 0) return c;
  }
  return a.size() <=> b.size();
}

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::Name:
      return name_;
    case Kind::Tuple: {
      std::string s = "(";
      for (size_t i = 0; i < size(); ++i) s += (i ? ", " : "") + items()[i].to_string();
      return s + ")";
    }
    case Kind::Inj:
      return "[" + items()[0].to_string() + ": " + items()[1].to_string() + "]";
    case Kind::Func: {
      std::string s = "{";
      for (size_t i = 0; i < size(); ++i) s += (i ? ", " : "") + items()[i].to_string();
      return s + "}";
    }
  }
  return "?";
}

namespace {

struct ValueParser {
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && s[i] == ' ') ++i;
  }

  Value parse() {
    ws();
    if (i < s.size() && s[i] == '(') {
      ++i;
      std::vector<Value> xs;
      ws();
      if (i < s.size() && s[i] == ')') {
        ++i;
        return Value::tuple({});
      }
      for (;;) {
        xs.push_back(parse());
        ws();
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == ')') {
          ++i;
          return Value::tuple(std::move(xs));
        }
        throw Error(ErrorKind::Model, "malformed value: " + s);
      }
    }
    size_t start = i;
    while (i < s.size() && s[i] != ',' && s[i] != ')' && s[i] != '(' && s[i] != ' ') ++i;
    if (i == start) throw Error(ErrorKind::Model, "malformed value: " + s);
    return Value::name(s.substr(start, i - start));
  }
};

}  // namespace

Value parse_value(const std::string& s) {
  ValueParser p{s};
  Value v = p.parse();
  p.ws();
  if (p.i != s.size()) throw Error(ErrorKind::Model, "malformed value: " + s);
  return v;
}

int FinSet::index_of(const Value& v) const {
  auto it = std::lower_bound(elems.begin(), elems.end(), v);
  if (it == elems.end() || !(*it == v)) return -1;
  return static_cast<int>(it - elems.begin());
}

}  // namespace dinat

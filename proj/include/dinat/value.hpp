#pragma once

#include <compare>
#include <memory>
#include <string>
#include <vector>

namespace dinat {

// Structured element of a finite set. Ordering is canonical: by kind, then
// by name or lexicographically by children.
class Value {
 public:
  enum class Kind { Name, Tuple, Inj, Func };

  Value() : kind_(Kind::Tuple) {}
  static Value name(std::string s);
  static Value tuple(std::vector<Value> xs);
  // Coend element: class representative (object, element).
  static Value inj(Value obj, Value elem);
  // Function table, outputs listed in the canonical order of the domain.
  static Value func(std::vector<Value> outputs);

  Kind kind() const { return kind_; }
  const std::string& str() const { return name_; }
  const std::vector<Value>& items() const;
  size_t size() const { return items().size(); }
  const Value& operator[](size_t i) const { return items()[i]; }

  std::strong_ordering operator<=>(const Value& o) const;
  bool operator==(const Value& o) const { return (*this <=> o) == 0; }

  std::string to_string() const;

 private:
  Kind kind_;
  std::string name_;
  std::shared_ptr<const std::vector<Value>> kids_;
};

// Parses the to_string form of Name and Tuple values, e.g. "(a, b)".
Value parse_value(const std::string& s);

using Elems = std::vector<Value>;

// Sorted, duplicate free.
struct FinSet {
  Elems elems;

  size_t size() const { return elems.size(); }
  int index_of(const Value& v) const;  // -1 if absent
  bool contains(const Value& v) const { return index_of(v) >= 0; }
};

}  // namespace dinat

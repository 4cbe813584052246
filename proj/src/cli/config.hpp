#ifndef QEV_CLI_CONFIG_HPP
#define QEV_CLI_CONFIG_HPP

#include "qev/common.hpp"
#include "qev/units.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace qev::cli {

// Flat INI-style configuration: [section] headers, key = value lines,
// '#' comments. No nesting. Unknown sections or keys are hard errors at
// validation time, so typos never pass silently.
class ConfigFile {
public:
  using Section = std::map<std::string, std::string>;

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  const std::string& get(const std::string& section,
                         const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  Real number(const std::string& section, const std::string& key) const;
  Real number_or(const std::string& section, const std::string& key,
                 Real fallback) const;
  long integer(const std::string& section, const std::string& key) const;
  long integer_or(const std::string& section, const std::string& key,
                  long fallback) const;
  bool flag_or(const std::string& section, const std::string& key,
               bool fallback) const;

  // whitespace-separated numbers
  Vec numbers(const std::string& section, const std::string& key) const;
  // semicolon-separated groups of numbers, each of the same length
  std::vector<Vec> vector_list(const std::string& section,
                               const std::string& key) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);

  const std::map<std::string, Section>& sections() const { return sections_; }

  // every present section/key must appear in the schema
  void validate_schema(
      const std::map<std::string, std::set<std::string>>& schema) const;

  std::string serialize() const;

private:
  std::map<std::string, Section> sections_;
};

}  // namespace qev::cli

#endif

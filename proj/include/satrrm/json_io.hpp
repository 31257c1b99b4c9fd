// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace satrrm {

/// Formats a double with 12 significant digits ("%.12g"). All emitted files
/// go through this one formatter so that repeated runs are byte-identical.
std::string format_double(double v);

/// Streaming JSON writer with caller-controlled key order and format_double
/// number formatting. The reading side uses nlohmann::json; this writer
/// exists purely to pin the output bytes.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& number_array(const std::vector<double>& v);
  JsonWriter& number_array(const std::vector<int>& v);
  JsonWriter& number_array(const std::vector<long long>& v);

  const std::string& str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> has_item_;
  bool pending_key_ = false;
};

std::string json_escape(std::string_view s);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace satrrm

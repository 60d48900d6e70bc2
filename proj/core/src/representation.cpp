#include "ragmon/representation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ragmon {

const char* to_string(RepresentationKind kind) {
  return kind == RepresentationKind::kStructuredJson ? "json" : "nlr";
}

RepresentationKind representation_kind_from_string(const std::string& name) {
  if (name == "json") return RepresentationKind::kStructuredJson;
  if (name == "nlr") return RepresentationKind::kNaturalLanguage;
  throw std::invalid_argument("unknown representation kind: " + name);
}

std::string format_quantity(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("format_quantity: value must be finite and >= 0");
  }
  // Half-up at the fourth decimal, done in integer space so the rendering
  // is exact and platform-independent.
  const double scaled = std::floor(value * 10000.0 + 0.5);
  const auto total = static_cast<long long>(scaled);
  const long long whole = total / 10000;
  long long frac = total % 10000;
  char frac_digits[5];
  std::snprintf(frac_digits, sizeof frac_digits, "%04lld", frac);
  int len = 4;
  while (len > 1 && frac_digits[len - 1] == '0') --len;
  return std::to_string(whole) + "." + std::string(frac_digits, len);
}

namespace {

std::string json_direction(const DirectionStats& d) {
  std::string out = "{\"packets\": ";
  out += std::to_string(d.packets);
  out += ", \"bytes\": ";
  out += std::to_string(d.bytes);
  out += ", \"packets_per_second\": ";
  out += format_quantity(d.packets_per_second);
  out += ", \"bytes_per_second\": ";
  out += format_quantity(d.bytes_per_second);
  out += ", \"avg_packet_size\": ";
  out += format_quantity(d.avg_packet_size);
  out += "}";
  return out;
}

void check_label(const std::optional<int>& label) {
  if (label && *label != 0 && *label != 1) {
    throw std::invalid_argument("render: label must be 0 or 1");
  }
}

std::string nlr_direction(const DirectionStats& d, bool received) {
  std::string out;
  if (received) {
    out = "The interface received ";
  } else {
    out = "It transmitted ";
  }
  out += std::to_string(d.packets);
  out += " packets totaling ";
  out += std::to_string(d.bytes);
  out += received ? " bytes with a rate of " : " bytes at a rate of ";
  out += format_quantity(d.packets_per_second);
  out += " packets per second and ";
  out += format_quantity(d.bytes_per_second);
  out += " bytes per second";
  if (received) {
    out += ". The average received packet size was ";
    out += format_quantity(d.avg_packet_size);
    out += " bytes. ";
  } else {
    out += " with an average transmitted packet size of ";
    out += format_quantity(d.avg_packet_size);
    out += " bytes.";
  }
  return out;
}

}  // namespace

RenderedSample render_json(const InterfaceFeatures& features,
                           std::optional<int> label) {
  check_label(label);
  std::string text = "{\"interface_status\": {\"input_features\": {\"received\": ";
  text += json_direction(features.received);
  text += ", \"sent\": ";
  text += json_direction(features.sent);
  text += "}";
  if (label) {
    text += ", \"output_label\": ";
    text += std::to_string(*label);
  }
  text += "}}";
  return {std::move(text), RepresentationKind::kStructuredJson, label};
}

RenderedSample render_nlr(const InterfaceFeatures& features,
                          std::optional<int> label) {
  check_label(label);
  std::string text = nlr_direction(features.received, true);
  text += nlr_direction(features.sent, false);
  if (label) {
    text += " The interface label is ";
    text += std::to_string(*label);
    text += ".";
  }
  return {std::move(text), RepresentationKind::kNaturalLanguage, label};
}

RenderedSample render(const InterfaceFeatures& features, RepresentationKind kind,
                      std::optional<int> label) {
  return kind == RepresentationKind::kStructuredJson
             ? render_json(features, label)
             : render_nlr(features, label);
}

}  // namespace ragmon

#include "mpca/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdint>

#include "json.hpp"

namespace mpca {

using nlohmann::json;

namespace {

json require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw MpcaError(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<double> number_array(const json& arr, const char* field) {
  if (!arr.is_array())
    throw MpcaError(ErrorCode::ParseError, std::string(field) + " must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number())
      throw MpcaError(ErrorCode::ParseError, std::string(field) + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

MpcaInstance read_instance(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw MpcaError(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object())
    throw MpcaError(ErrorCode::ParseError, "instance must be a JSON object");

  MpcaInstance inst;
  json model = require(doc, "rate_model");
  if (!model.is_string())
    throw MpcaError(ErrorCode::ParseError, "rate_model must be a string");
  std::string model_name = model.get<std::string>();
  if (model_name == "log_snr") {
    inst.rate_model = RateModel::LogSnr;
  } else if (model_name == "linear") {
    inst.rate_model = RateModel::Linear;
  } else {
    throw MpcaError(ErrorCode::ParseError, "rate_model must be \"log_snr\" or \"linear\"");
  }

  json users = require(doc, "num_users");
  json channels = require(doc, "num_channels");
  if (!users.is_number_integer() || !channels.is_number_integer())
    throw MpcaError(ErrorCode::ParseError, "num_users and num_channels must be integers");
  inst.num_users = users.get<int>();
  inst.num_channels = channels.get<int>();

  json gains = require(doc, "gains");
  if (!gains.is_array() || static_cast<int>(gains.size()) != inst.num_users)
    throw MpcaError(ErrorCode::ParseError, "gains must be an array with one row per user");
  for (const auto& row : gains) {
    auto parsed = number_array(row, "gains row");
    if (static_cast<int>(parsed.size()) != inst.num_channels)
      throw MpcaError(ErrorCode::ParseError, "gains row length must equal num_channels");
    inst.gains.push_back(std::move(parsed));
  }

  inst.rate_targets = number_array(require(doc, "rate_targets"), "rate_targets");
  if (static_cast<int>(inst.rate_targets.size()) != inst.num_users)
    throw MpcaError(ErrorCode::ParseError, "rate_targets must have one entry per user");

  if (auto it = doc.find("channel_groups"); it != doc.end() && !it->is_null()) {
    if (!it->is_array() || static_cast<int>(it->size()) != inst.num_channels)
      throw MpcaError(ErrorCode::ParseError, "channel_groups must be an array of num_channels ids");
    std::vector<int> groups;
    for (const auto& v : *it) {
      if (!v.is_number_integer())
        throw MpcaError(ErrorCode::ParseError, "channel_groups must contain integers");
      groups.push_back(v.get<int>());
    }
    inst.channel_groups = std::move(groups);
  }
  return inst;
}

std::string write_instance(const MpcaInstance& inst) {
  json doc;
  doc["rate_model"] = inst.rate_model == RateModel::LogSnr ? "log_snr" : "linear";
  doc["num_users"] = inst.num_users;
  doc["num_channels"] = inst.num_channels;
  doc["gains"] = inst.gains;
  doc["rate_targets"] = inst.rate_targets;
  if (inst.channel_groups) doc["channel_groups"] = *inst.channel_groups;
  return doc.dump();
}

namespace {

json allocation_to_json(const Allocation& alloc) {
  json doc;
  json owners = json::array();
  for (int owner : alloc.channel_owner) {
    if (owner == kUnassigned)
      owners.push_back(nullptr);
    else
      owners.push_back(owner + 1);  // 1-based on the wire
  }
  doc["channel_owner"] = std::move(owners);
  doc["rates"] = alloc.rates;
  doc["powers"] = alloc.powers;
  return doc;
}

}  // namespace

std::string write_allocation(const Allocation& alloc) {
  return allocation_to_json(alloc).dump();
}

Allocation read_allocation(std::string_view bytes, int num_users) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw MpcaError(ErrorCode::ParseError, e.what());
  }
  Allocation alloc;
  json owners = require(doc, "channel_owner");
  if (!owners.is_array())
    throw MpcaError(ErrorCode::ParseError, "channel_owner must be an array");
  for (const auto& v : owners) {
    if (v.is_null()) {
      alloc.channel_owner.push_back(kUnassigned);
    } else if (v.is_number_integer()) {
      int id = v.get<int>();
      if (id < 1 || id > num_users)
        throw MpcaError(ErrorCode::ParseError, "channel owner id out of range");
      alloc.channel_owner.push_back(id - 1);
    } else {
      throw MpcaError(ErrorCode::ParseError, "channel_owner entries must be integers or null");
    }
  }
  alloc.rates = number_array(require(doc, "rates"), "rates");
  alloc.powers = number_array(require(doc, "powers"), "powers");
  if (alloc.rates.size() != alloc.channel_owner.size() ||
      alloc.powers.size() != alloc.channel_owner.size())
    throw MpcaError(ErrorCode::ParseError, "allocation arrays must have equal length");
  return alloc;
}

std::string write_report(const SolveReport& report) {
  json doc = allocation_to_json(report.allocation);
  doc["objective"] = report.objective;
  doc["algorithm"] = report.algorithm;
  doc["wall_time_s"] = report.wall_time_s;
  doc["instance_digest"] = report.instance_digest;
  return doc.dump();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string instance_digest(const MpcaInstance& inst) {
  return sha256_hex(write_instance(inst));
}

}  // namespace mpca

#include "sprayer/script.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sprayer/text_util.hpp"

namespace sprayer {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool parse_on_off(std::string_view s, bool& out) {
  if (s == "on" || s == "ON" || s == "1") {
    out = true;
    return true;
  }
  if (s == "off" || s == "OFF" || s == "0") {
    out = false;
    return true;
  }
  return false;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string decode_send_tokens(const std::vector<std::string_view>& tokens, std::size_t first) {
  std::string bytes;
  for (std::size_t k = first; k < tokens.size(); ++k) {
    std::string_view t = tokens[k];
    if (t.size() == 4 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X') && hex_digit(t[2]) >= 0 &&
        hex_digit(t[3]) >= 0) {
      bytes.push_back(static_cast<char>(hex_digit(t[2]) * 16 + hex_digit(t[3])));
    } else {
      bytes.append(t);
    }
  }
  return bytes;
}

Action parse_tokens(const std::vector<std::string_view>& tok, std::size_t first) {
  if (first >= tok.size()) throw ScriptError(0, "missing event kind");
  const std::string kind = upper(tok[first]);
  const std::size_t nargs = tok.size() - first - 1;
  auto arg = [&](std::size_t k) { return tok[first + 1 + k]; };
  auto want = [&](std::size_t n) {
    if (nargs != n)
      throw ScriptError(0, kind + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                               std::to_string(nargs));
  };

  if (kind == "SEND") {
    if (nargs == 0) throw ScriptError(0, "SEND needs at least one byte");
    return Action::send(decode_send_tokens(tok, first + 1));
  }
  if (kind == "BOOM") {
    want(2);
    BoomAxis axis;
    if (!parse_axis(arg(0), axis))
      throw ScriptError(0, "unknown boom axis '" + std::string(arg(0)) + "' (vertical|horizontal|yaw|pitch)");
    auto v = parse_double(arg(1));
    if (!v) throw ScriptError(0, "BOOM value must be a number, got '" + std::string(arg(1)) + "'");
    const bool linear = axis == BoomAxis::Vertical || axis == BoomAxis::Horizontal;
    return Action::boom(axis, linear ? in_to_m(*v) : deg_to_rad(*v));
  }
  if (kind == "NOZZLE") {
    want(1);
    auto v = parse_int(arg(0));
    if (!v || *v < 0 || *v > 7) throw ScriptError(0, "NOZZLE turns must be an integer in [0, 7]");
    return Action::nozzle(static_cast<int>(*v));
  }
  if (kind == "SOLAR" || kind == "SWITCH") {
    want(1);
    bool on = false;
    if (!parse_on_off(arg(0), on)) throw ScriptError(0, kind + " expects on|off");
    return kind == "SOLAR" ? Action::solar(on) : Action::power_switch(on);
  }
  if (kind == "SPEED") {
    want(1);
    auto v = parse_int(arg(0));
    if (!v || *v < 0 || *v > 255) throw ScriptError(0, "SPEED pwm must be an integer in [0, 255]");
    return Action::speed(static_cast<int>(*v));
  }
  throw ScriptError(0, "unknown event kind '" + std::string(tok[first]) + "'");
}

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

}  // namespace

std::int64_t quantize_time(double at, double dt) {
  return static_cast<std::int64_t>(std::ceil(at / dt - 0.5 - 1e-9));
}

Action parse_action(std::string_view text) {
  auto tok = split_ws(trim(strip_comment(text)));
  if (!tok.empty() && upper(tok[0]) == "END") throw ScriptError(0, "END is only valid in scripts");
  return parse_tokens(tok, 0);
}

MissionScript parse_script(std::string_view text) {
  MissionScript s;
  bool have_end = false;
  double last_t = 0.0;
  int line_no = 0;
  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    auto tok = split_ws(trim(strip_comment(raw)));
    if (tok.empty()) continue;
    if (have_end) throw ScriptError(line_no, "event after END");
    auto t = parse_double(tok[0]);
    if (!t) throw ScriptError(line_no, "expected event time in seconds, got '" + std::string(tok[0]) + "'");
    if (*t < 0.0) throw ScriptError(line_no, "event time must be >= 0");
    if (*t < last_t) throw ScriptError(line_no, "events must be in non-decreasing time order");
    last_t = *t;
    if (tok.size() >= 2 && upper(tok[1]) == "END") {
      if (tok.size() != 2) throw ScriptError(line_no, "END takes no arguments");
      have_end = true;
      s.end_at = *t;
      s.end_line = line_no;
      continue;
    }
    try {
      s.events.push_back({*t, line_no, parse_tokens(tok, 1)});
    } catch (const ScriptError& e) {
      throw ScriptError(line_no, e.what());
    }
  }
  if (!have_end) throw ScriptError(line_no, "script has no END event");
  return s;
}

std::string format_action(const Action& a) {
  std::ostringstream out;
  out.precision(17);
  switch (a.kind) {
    case ActionKind::Send: {
      out << "SEND";
      for (unsigned char c : a.bytes) {
        if (std::isalpha(c)) {
          out << ' ' << static_cast<char>(c);
        } else {
          char buf[8];
          std::snprintf(buf, sizeof buf, " 0x%02X", c);
          out << buf;
        }
      }
      break;
    }
    case ActionKind::Boom: {
      const bool linear = a.axis == BoomAxis::Vertical || a.axis == BoomAxis::Horizontal;
      out << "BOOM " << axis_name(a.axis) << ' ' << (linear ? m_to_in(a.value) : rad_to_deg(a.value));
      break;
    }
    case ActionKind::Nozzle:
      out << "NOZZLE " << a.number;
      break;
    case ActionKind::Solar:
      out << "SOLAR " << (a.on ? "on" : "off");
      break;
    case ActionKind::Speed:
      out << "SPEED " << a.number;
      break;
    case ActionKind::Switch:
      out << "SWITCH " << (a.on ? "on" : "off");
      break;
  }
  return out.str();
}

std::string format_script(const MissionScript& s) {
  std::string out;
  for (const auto& e : s.events) out += format_time(e.at) + ' ' + format_action(e.action) + '\n';
  out += format_time(s.end_at) + " END\n";
  return out;
}

}  // namespace sprayer

#include "powernap/sim_time.hpp"

#include <cmath>
#include <cstdio>

#include "powernap/error.hpp"

namespace powernap {

int time_of_day(SimTime t) {
    double m = std::fmod(t, static_cast<double>(kMinutesPerDay));
    if (m < 0) m += kMinutesPerDay;
    return static_cast<int>(m);
}

int parse_time_of_day(const std::string& text) {
    int hh = 0;
    int mm = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%2d:%2d%c", &hh, &mm, &tail) != 2 || text.size() != 5 ||
        text[2] != ':') {
        throw Error(ErrorCode::MalformedTime, "\"" + text + "\" is not HH:MM");
    }
    if (hh < 0 || hh > 23 || mm < 0 || mm > 59) {
        throw Error(ErrorCode::MalformedTime, "\"" + text + "\" out of range");
    }
    return hh * 60 + mm;
}

std::string format_time_of_day(int minutes) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

std::string format_sim_time(SimTime t) {
    if (t == std::floor(t) && std::abs(t) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(t));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    // trim trailing zeros but keep one digit after the point
    std::string s(buf);
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

}  // namespace powernap

#pragma once

#include <map>
#include <string>
#include <vector>

namespace skdv {

// Time series sharing one time axis, keyed by observable name.
struct SeriesRecord {
    std::vector<double> t;
    std::map<std::string, std::vector<double>> columns;

    void push(const std::string& name, double value) { columns[name].push_back(value); }
    const std::vector<double>& operator[](const std::string& name) const { return columns.at(name); }
};

}  // namespace skdv

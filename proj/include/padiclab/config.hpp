#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace padiclab {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration: defaults < config file (key=value) < command line.
struct RunConfig {
    std::vector<long long> primes{7, 11};
    long long dmax = 500;       // |d| cap for discriminant ladders
    long long fmax = 6;         // conductor cap
    int res = 1;                // residue resolution r
    long long budget = 500000000;  // enumeration budget
    long long classpoly_cap = 40000;
    std::string out = "reports";
    std::string format = "tsv";  // tsv | json
    unsigned long long seed = 1;
    int jobs = 1;

    void apply(const std::string& key, const std::string& value) {
        auto parse_ll = [&](const std::string& v) {
            size_t pos = 0;
            long long r = std::stoll(v, &pos);
            if (pos != v.size()) throw config_error("bad integer for " + key + ": " + v);
            return r;
        };
        if (key == "p") {
            primes.clear();
            std::istringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                auto dots = tok.find("..");
                if (dots == std::string::npos) {
                    primes.push_back(parse_ll(tok));
                } else {
                    long long lo = std::stoll(tok.substr(0, dots));
                    long long hi = std::stoll(tok.substr(dots + 2));
                    for (long long v = lo; v <= hi; ++v) primes.push_back(v);
                }
            }
            if (primes.empty()) throw config_error("empty prime list");
        } else if (key == "dmax") {
            dmax = parse_ll(value);
        } else if (key == "fmax") {
            fmax = parse_ll(value);
        } else if (key == "res") {
            res = (int)parse_ll(value);
        } else if (key == "budget") {
            budget = parse_ll(value);
        } else if (key == "cap") {
            classpoly_cap = parse_ll(value);
        } else if (key == "out") {
            out = value;
        } else if (key == "format") {
            if (value != "tsv" && value != "json")
                throw config_error("format must be tsv or json");
            format = value;
        } else if (key == "seed") {
            seed = (unsigned long long)parse_ll(value);
        } else if (key == "jobs") {
            jobs = (int)parse_ll(value);
        } else {
            throw config_error("unknown config key: " + key);
        }
        if (dmax <= 0 || fmax <= 0 || res < 1 || budget <= 0 || jobs < 1)
            throw config_error("caps must be positive");
    }

    void load_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw config_error("cannot open config file: " + path);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw config_error("bad config line: " + line);
            apply(line.substr(0, eq), line.substr(eq + 1));
        }
    }
};

}  // namespace padiclab

#pragma once

// Compiles every tests/reject/<case>/main.cpp and expects the compiler to
// refuse it with each line of expected.txt somewhere in its diagnostics.
// tests/reject_control/main.cpp uses the same constructs correctly and must
// compile, which shows the include paths and flags are sound.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace reject {

struct CaseResult {
    std::string name;
    bool rejected = false;
    std::vector<std::string> missing;  // expected substrings not found
    bool ok() const { return rejected && missing.empty(); }
};

struct Result {
    std::vector<CaseResult> cases;
    bool control_compiles = false;
    std::string control_output;

    std::size_t passed() const {
        return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](auto& c) { return c.ok(); }));
    }
    bool ok() const { return control_compiles && !cases.empty() && passed() == cases.size(); }
};

struct Compiled {
    int status;
    std::string output;
};

inline Compiled compile(const std::string& cxx, const std::filesystem::path& src, const std::filesystem::path& root) {
    const std::string cmd = "'" + cxx + "' -std=c++20 -fsyntax-only -I'" + (root / "include").string() + "' -I'" +
                            (root / "demos" / "include").string() + "' '" + src.string() + "' 2>&1";
    Compiled c{-1, {}};
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return c;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) c.output.append(buf.data(), n);
    const int raw = ::pclose(p);
    c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return c;
}

inline std::vector<std::string> expected_lines(const std::filesystem::path& file) {
    std::ifstream in(file);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

inline Result run(const std::string& cxx, const std::filesystem::path& root) {
    Result r;
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root / "tests" / "reject"))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());

    for (const auto& dir : dirs) {
        CaseResult c;
        c.name = dir.filename().string();
        const auto out = compile(cxx, dir / "main.cpp", root);
        c.rejected = out.status != 0;
        const auto expected = expected_lines(dir / "expected.txt");
        if (expected.empty()) c.missing.push_back("<expected.txt is empty>");
        for (const auto& e : expected)
            if (out.output.find(e) == std::string::npos) c.missing.push_back(e);
        r.cases.push_back(std::move(c));
    }

    const auto control = compile(cxx, root / "tests" / "reject_control" / "main.cpp", root);
    r.control_compiles = control.status == 0;
    r.control_output = control.output;
    return r;
}

}  // namespace reject

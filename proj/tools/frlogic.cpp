// Copyright 2026 The frlogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// frlogic: run experiment descriptions, emit the bundled corpus, list it.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frlogic/frlogic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;

struct CollapseRequest {
    std::size_t step = 0;
    std::optional<unsigned> outcome;
};

CollapseRequest parse_collapse(const std::string &text) {
    CollapseRequest req;
    bool have_step = false;
    bool have_outcome = false;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            throw frlogic::Error(frlogic::ErrorKind::InvalidArgument, "--collapse expects step=<k>,outcome=<label>");
        }
        const std::string key = part.substr(0, eq);
        const std::string value = part.substr(eq + 1);
        if (key == "step") {
            try {
                req.step = std::stoul(value);
            } catch (const std::exception &) {
                throw frlogic::Error(frlogic::ErrorKind::InvalidArgument, "bad step '" + value + "' in --collapse");
            }
            have_step = true;
        } else if (key == "outcome") {
            if (value != "sample") {
                auto o = frlogic::parse_label(value);
                if (!o) {
                    throw frlogic::Error(frlogic::ErrorKind::InvalidArgument, "bad outcome '" + value + "' in --collapse");
                }
                req.outcome = *o;
            }
            have_outcome = true;
        } else {
            throw frlogic::Error(frlogic::ErrorKind::InvalidArgument, "unknown key '" + key + "' in --collapse");
        }
    }
    if (!have_step || !have_outcome) {
        throw frlogic::Error(frlogic::ErrorKind::InvalidArgument, "--collapse expects step=<k>,outcome=<label>");
    }
    return req;
}

struct RunOptions {
    std::optional<frlogic::Mode> mode;
    std::optional<std::uint64_t> seed;
    std::vector<CollapseRequest> collapses;
};

struct FileOutcome {
    std::string path;
    std::optional<frlogic::ScenarioResult> result;
    std::string error;
};

FileOutcome run_file(const std::string &path, const RunOptions &opts) {
    FileOutcome out;
    out.path = path;
    try {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            out.error = path + ": cannot open file";
            return out;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        auto file = frlogic::dsl::parse(buf.str());
        frlogic::Scenario &scn = file.scenario;
        if (opts.seed) {
            scn.seed = opts.seed;
        }
        for (const auto &c : opts.collapses) {
            frlogic::force_collapse(scn, c.step, c.outcome);
        }
        out.result = frlogic::run_scenario(scn, opts.mode);
    } catch (const frlogic::ParseError &e) {
        out.error = path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.col()) + ": parse error: expected " +
                    e.expected();
    } catch (const frlogic::SemanticError &e) {
        out.error = path + ":" + std::to_string(e.line()) + ": " + std::string(frlogic::to_string(e.cause())) + ": " + e.what();
    } catch (const frlogic::Error &e) {
        out.error = path + ": " + std::string(frlogic::to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception &e) {
        out.error = path + ": " + e.what();
    }
    return out;
}

int run_command(const std::vector<std::string> &files, const std::string &format, const RunOptions &opts,
                const std::string &out_path, bool quiet) {
    std::vector<std::future<FileOutcome>> jobs;
    jobs.reserve(files.size());
    for (const auto &f : files) {
        jobs.push_back(std::async(std::launch::async, run_file, f, opts));
    }
    std::vector<FileOutcome> outcomes;
    for (auto &j : jobs) {
        outcomes.push_back(j.get());
    }
    int code = kExitOk;
    std::string text;
    frlogic::report::json arr = frlogic::report::json::array();
    for (const auto &o : outcomes) {
        if (!o.result) {
            std::cerr << "frlogic: " << o.error << "\n";
            code = kExitError;
            continue;
        }
        if (!o.result->all_matched() && code == kExitOk) {
            code = kExitMismatch;
        }
        if (format == "json") {
            auto j = frlogic::report::to_json(*o.result);
            j["file"] = o.path;
            arr.push_back(j);
        } else {
            text += (text.empty() ? "" : "\n") + frlogic::report::to_text(*o.result);
        }
    }
    if (format == "json") {
        text = (arr.size() == 1 ? arr.front().dump(2) : arr.dump(2)) + "\n";
        if (arr.empty()) {
            text.clear();
        }
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "frlogic: cannot write " << out_path << "\n";
            return kExitError;
        }
        out << text;
    } else if (!quiet) {
        std::cout << text;
    }
    return code;
}

int emit_command(const std::string &dir) {
    std::filesystem::create_directories(dir);
    for (const auto &s : frlogic::library::all()) {
        const auto path = std::filesystem::path(dir) / (s.name + ".fr");
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "frlogic: cannot write " << path.string() << "\n";
            return kExitError;
        }
        out << frlogic::dsl::emit(s);
    }
    return kExitOk;
}

int list_command() {
    for (const auto &s : frlogic::library::all()) {
        std::cout << s.name << "  " << s.description << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"frlogic: collapse-free measurement simulator and statement engine"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "Run experiment description files");
    std::vector<std::string> files;
    std::string format = "text";
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    bool quiet = false;
    std::vector<std::string> collapse_specs;
    run->add_option("files", files, "Experiment files (.fr)")->required();
    run->add_option("--report", format, "Report format")->check(CLI::IsMember({"text", "json"}));
    run->add_option("--mode", mode, "Arithmetic mode (default: the file's mode, exact unless stated)")
        ->check(CLI::IsMember({"exact", "float"}));
    run->add_option("--seed", seed, "Seed for sampled collapse");
    run->add_option("--out", out_path, "Write the report to a file");
    run->add_flag("--quiet", quiet, "Print nothing; exit code only");
    run->add_option("--collapse", collapse_specs, "Force collapse: step=<k>,outcome=<label|sample>")->take_all();

    auto *emit = app.add_subcommand("emit", "Write the bundled scenarios as .fr files");
    std::string dir = "scenarios";
    emit->add_option("dir", dir, "Output directory");

    app.add_subcommand("list", "List the bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) {
            RunOptions opts;
            if (!mode.empty()) {
                opts.mode = mode == "exact" ? frlogic::Mode::exact : frlogic::Mode::floating;
            }
            opts.seed = seed;
            for (const auto &c : collapse_specs) {
                opts.collapses.push_back(parse_collapse(c));
            }
            return run_command(files, format, opts, out_path, quiet);
        }
        if (*emit) {
            return emit_command(dir);
        }
        return list_command();
    } catch (const std::exception &e) {
        std::cerr << "frlogic: " << e.what() << "\n";
        return kExitError;
    }
}

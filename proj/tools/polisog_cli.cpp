#include <polisog/polisog.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

bool read_input(const std::string& path, std::string& text) {
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
        return true;
    }
    std::ifstream in(path);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
}

int exit_code(int rc) { return rc == POLISOG_OK ? 0 : rc == POLISOG_NEGATIVE ? 2 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with polarized isogenies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(polisog_version()));

    std::string input = "-", output;
    unsigned long long seed = 1;
    int precision = 12, height = 3;
    std::string norm_cap;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", input, "JSON input file, - for stdin")->default_val("-");
        sub->add_option("-o,--output", output, "Write the JSON result here instead of stdout");
    };

    std::string verbs = polisog_verbs();
    std::vector<CLI::App*> runs;
    for (size_t pos = 0; pos <= verbs.size();) {
        size_t end = verbs.find(',', pos);
        if (end == std::string::npos) end = verbs.size();
        CLI::App* sub = app.add_subcommand(verbs.substr(pos, end - pos));
        add_common(sub);
        sub->add_option("--seed", seed, "Seed for randomized steps")->default_val(1);
        sub->add_option("--precision", precision, "p-adic precision")->default_val(12)->check(CLI::Range(1, 1000));
        sub->add_option("--norm-cap", norm_cap, "Norm cap for the exhaustive search, n or n/d");
        sub->add_option("--height", height, "Height bound for isometry witness searches")->default_val(3)->check(CLI::Range(1, 10));
        runs.push_back(sub);
        pos = end + 1;
    }

    std::string validate_verb;
    CLI::App* validate = app.add_subcommand("validate", "Check an input document without running it");
    add_common(validate);
    validate->add_option("--verb", validate_verb, "Verb the input is meant for (default: the input's \"verb\" key)");

    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (!read_input(input, text)) {
        std::cerr << "polisog: cannot read " << input << "\n";
        return 1;
    }

    char* out = nullptr;
    int rc;
    if (validate->parsed()) {
        rc = polisog_validate(validate_verb.empty() ? nullptr : validate_verb.c_str(), text.c_str(), &out);
    } else {
        polisog_session* s = polisog_session_new();
        polisog_set_seed(s, seed);
        polisog_set_precision(s, precision);
        polisog_set_height(s, height);
        if (!norm_cap.empty() && polisog_set_norm_cap(s, norm_cap.c_str()) != POLISOG_OK) {
            std::cerr << "polisog: " << polisog_last_error_message(s) << "\n";
            polisog_session_free(s);
            return 1;
        }
        std::string verb;
        for (auto* sub : runs)
            if (sub->parsed()) verb = sub->get_name();
        rc = polisog_run(s, verb.c_str(), text.c_str(), &out);
        if (rc != POLISOG_OK && rc != POLISOG_NEGATIVE) std::cerr << "polisog: " << polisog_last_error_message(s) << "\n";
        polisog_session_free(s);
    }

    std::string result = out ? out : "";
    polisog_string_free(out);
    if (output.empty()) {
        std::cout << result << "\n";
    } else {
        std::ofstream f(output);
        if (!f) {
            std::cerr << "polisog: cannot write " << output << "\n";
            return 1;
        }
        f << result << "\n";
    }
    return exit_code(rc);
}

#include <unistd.h>

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"

#include "hypoteq/error.hpp"
#include "hypoteq/service/http_api.hpp"
#include "hypoteq/service/session.hpp"
#include "hypoteq/service/storage.hpp"

using namespace hypoteq;

namespace {

// A line is appended to the pending text until it forms a complete
// statement, ends with `;`, or is blank.
int interactive(service::Session& s) {
    if (!isatty(STDIN_FILENO)) {
        std::stringstream all;
        all << std::cin.rdbuf();
        auto r = service::run_script_text(all.str(), s, true);
        std::cout << r.output;
        return static_cast<int>(r.errors);
    }
    std::string buf, line;
    int errors = 0;
    std::cout << "HQ> " << std::flush;
    while (std::getline(std::cin, line)) {
        buf += line + "\n";
        auto last = line.find_last_not_of(" \t\r");
        bool done = last == std::string::npos || line[last] == ';' ||
                    service::is_complete_statement(buf);
        if (!done) {
            std::cout << "  > " << std::flush;
            continue;
        }
        for (const auto& st : service::split_statements(buf)) {
            auto out = service::repl_eval(st, s);
            std::cout << out.text << std::flush;
            if (!out.ok) ++errors;
            if (s.quit) return errors;
        }
        buf.clear();
        std::cout << "HQ> " << std::flush;
    }
    return errors;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypoteq: SQL with WITH and ASSUME over hypothetical Datalog"};
    int port = 0;
    std::string load, script;
    bool keep_going = false, show = false;
    app.add_option("--port", port, "serve the JSON API on this port");
    app.add_option("--load", load, "database file to load first");
    app.add_option("--script", script, "run statements from a file, then exit");
    app.add_flag("--keep-going", keep_going, "continue a script after errors");
    app.add_flag("--show-compilations", show, "display compiled Datalog for SQL queries");
    CLI11_PARSE(app, argc, argv);

    service::Session s;
    s.flags["show_compilations"] = show;
    try {
        if (!load.empty()) s.database = service::load_db(load);
    } catch (const Error& e) {
        std::cerr << "Error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    }

    if (!script.empty()) {
        try {
            auto r = service::run_script(script, s, keep_going);
            std::cout << r.output;
            if (r.errors) return 1;
        } catch (const Error& e) {
            std::cerr << "Error: " << e.kind() << ": " << e.what() << "\n";
            return 1;
        }
        if (!port) return 0;
    }

    if (port) {
        service::Api api(s.database);
        httplib::Server server;
        api.mount(server);
        std::cerr << "listening on port " << port << "\n";
        return server.listen("0.0.0.0", port) ? 0 : 1;
    }
    return interactive(s) ? 1 : 0;
}

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "easepatch/llm_client.hpp"

namespace easepatch {

/// Turns a --client value into a client. The default is make_client.
using ClientFactory = std::function<std::unique_ptr<LlmClient>(const std::string& spec)>;

/// Runs the command line front end. Payload goes to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on operation errors, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const ClientFactory& clients = {});

}  // namespace easepatch

// Copyright 2026 The Novelscope Authors.
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

#include "novelscope/llm/handle.hpp"

#include "novelscope/common/error.hpp"

namespace novelscope::llm {

ModelResponse LlmHandle::ask(const std::string& task, const std::map<std::string, std::string>& vars,
                             const AskOptions& options) const {
  if (!gateway || !prompts) throw Error(ErrorCode::kInternal, "LlmHandle is not wired");
  const PromptTemplate& t = prompts->get(task);
  ModelRequest req;
  req.model_id = model_id;
  req.system = render(t.system, vars);
  req.user = render(t.user, vars);
  req.schema_id = task;
  req.temperature = options.temperature;
  req.seed = options.seed;
  req.max_output_tokens = options.max_output_tokens;
  req.stage = options.stage;
  return gateway->complete(req, ctx);
}

std::string LlmHandle::user_prompt(const std::string& task,
                                   const std::map<std::string, std::string>& vars) const {
  return render(prompts->get(task).user, vars);
}

}  // namespace novelscope::llm

#include "spbdi/agent.hpp"

namespace spbdi {

namespace {

std::string text_of(const term& t) { return t.is_string() ? t.name : print_term(t); }

}  // namespace

void agent::register_builtins() {
    register_internal_action(".print", [](ia_context& ctx, const term& call) {
        std::string text;
        for (const auto& a : call.args) {
            text += text_of(substitute(ctx.subst, a));
        }
        ctx.self.trace("intention", json{{"op", "print"}, {"intention", ctx.intention}, {"text", text}});
        return ia_result::ok;
    });
    register_internal_action(".fail", [](ia_context&, const term&) { return ia_result::fail; });
    register_internal_action(".wait", [](ia_context& ctx, const term& call) {
        if (call.args.size() == 1 && call.args[0].is_number()) {
            if (call.args[0].value <= 0) {
                return ia_result::ok;
            }
            ctx.wait = wait_state{ctx.self.now() + call.args[0].value, std::nullopt};
            return ia_result::block;
        }
        if (call.args.size() == 2 && call.args[1].is_number()) {
            if (auto ans = query_first(ctx.self.beliefs(), call.args[0], ctx.subst, ctx.self.options().query_depth)) {
                ctx.subst = std::move(*ans);
                return ia_result::ok;
            }
            ctx.wait = wait_state{ctx.self.now() + call.args[1].value, call.args[0]};
            return ia_result::block;
        }
        return ia_result::fail;
    });
    register_internal_action(".suspend", [](ia_context& ctx, const term& call) {
        if (call.args.size() != 1) {
            return ia_result::fail;
        }
        ctx.self.suspend_intentions(call.args[0], term::atom("suspend"));
        return ia_result::ok;
    });
    register_internal_action(".resume", [](ia_context& ctx, const term& call) {
        if (call.args.size() != 1) {
            return ia_result::fail;
        }
        ctx.self.resume_intentions(call.args[0]);
        return ia_result::ok;
    });
    register_internal_action(".succeed_goal", [](ia_context& ctx, const term& call) {
        if (call.args.size() != 1) {
            return ia_result::fail;
        }
        ctx.self.succeed_intentions(call.args[0]);
        return ia_result::ok;
    });
    register_internal_action(".my_name", [](ia_context& ctx, const term& call) {
        if (call.args.size() != 1) {
            return ia_result::fail;
        }
        return unify_into(call.args[0], term::atom(ctx.self.name()), ctx.subst) ? ia_result::ok : ia_result::fail;
    });
    register_internal_action(".time", [](ia_context& ctx, const term& call) {
        if (call.args.size() != 1) {
            return ia_result::fail;
        }
        return unify_into(call.args[0], term::number(ctx.self.now()), ctx.subst) ? ia_result::ok : ia_result::fail;
    });
}

}  // namespace spbdi

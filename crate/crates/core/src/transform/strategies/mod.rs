mod block;
mod identifier;
mod insert_delete;
mod statement;
mod token;

use super::ctx::{Candidates, Ctx};

pub(crate) fn run(id: &str, ctx: &Ctx<'_>) -> Candidates {
    match id {
        "B-1" => block::for_to_while(ctx),
        "B-2" => block::while_to_for(ctx),
        "B-3" => block::merge_else_if(ctx),
        "B-4" => block::split_else_if(ctx),
        "B-5" => block::swap_if_else(ctx),
        "B-6" => block::split_and_condition(ctx),
        "B-7" => block::extract_function(ctx),
        "ID-1" => insert_delete::add_comment(ctx),
        "ID-2" => insert_delete::add_junk(ctx),
        "ID-3" => insert_delete::add_return(ctx),
        "ID-4" => insert_delete::add_import(ctx),
        "ID-5" => insert_delete::delete_comments(ctx),
        "ID-6" => insert_delete::delete_print(ctx),
        "ID-7" => insert_delete::remove_unused_variable(ctx),
        "GS-1" => statement::return_via_variable(ctx),
        "GS-2" => statement::move_declaration_into_for(ctx),
        "GS-3" => statement::move_declaration_out_of_for(ctx),
        "GS-4" => statement::split_declaration(ctx),
        "GS-5" => statement::negate_comparison(ctx),
        "GS-6" => statement::swap_comparison(ctx),
        "GS-7" => statement::expand_compound_assignment(ctx),
        "GS-8" => statement::expand_increment(ctx),
        "GS-9" => statement::add_braces(ctx),
        "GS-10" => statement::remove_braces(ctx),
        "GT-1" => token::bool_to_int(ctx),
        "GT-2" => token::int_to_bool(ctx),
        "GT-3" => token::widen_integral(ctx),
        "GT-4" => token::widen_to_floating(ctx),
        "GT-5" => token::change_input_api(ctx),
        "GT-6" => token::change_output_api(ctx),
        "I-1" => identifier::rename_functions(ctx),
        "I-2" => identifier::rename_variables(ctx),
        other => unreachable!("strategy {other} missing from dispatch"),
    }
}

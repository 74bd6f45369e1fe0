use super::{diagnostics_text, synthesize, Phase, PhaseReport, RedescribeError};
use crate::ir::{validate, walk_statements, AtomicAction, Binding, ConceptUnit, Level, Statement, TypeRegistry, Verb};

/// Names the E1 class uses for the parts of counting.
struct Roles {
    numlist: String,
    person: String,
    collection: (String, String),
    result: String,
}

fn roles(e1: &ConceptUnit, registry: &TypeRegistry) -> Result<Roles, String> {
    let find = |pred: &dyn Fn(&crate::ir::Attribute) -> bool, what: &str| {
        e1.attributes.iter().find(|a| pred(a)).map(|a| a.name.clone()).ok_or_else(|| format!("no {what} attribute"))
    };
    let var = |a: &crate::ir::Attribute| matches!(a.binding, Binding::Var(_));
    let numlist = find(&|a| a.is_const() && a.type_ref.as_str() == "intList", "numeral list")?;
    let person = find(&|a| var(a) && a.type_ref.as_str() == "Person", "actor")?;
    let result = find(&|a| var(a) && a.type_ref.as_str() == "int", "int result")?;
    let collection = e1
        .attributes
        .iter()
        .find(|a| var(a) && registry.is_collection(a.type_ref.as_str()) && registry.widen(a.type_ref.as_str()) == "objectSet")
        .map(|a| (a.name.clone(), a.type_ref.to_string()))
        .ok_or("no object set attribute")?;
    Ok(Roles { numlist, person, collection, result })
}

/// Turn a domain-bound E1 class into a shared counting skill: the objects
/// become any objects, the numeral list becomes common knowledge, the one
/// procedure splits into public steps, and fetching by number is added.
pub fn generalize_to_e2(e1: &ConceptUnit) -> Result<(Vec<ConceptUnit>, PhaseReport), RedescribeError> {
    generalize_with(e1, &TypeRegistry::default())
}

pub fn generalize_with(e1: &ConceptUnit, registry: &TypeRegistry) -> Result<(Vec<ConceptUnit>, PhaseReport), RedescribeError> {
    if e1.level != Level::E1 {
        return Err(RedescribeError::NotE1(format!("{} is at level {}", e1.name, e1.level)));
    }
    let diags = validate(e1);
    if !diags.is_empty() {
        return Err(RedescribeError::NotE1(diagnostics_text(&diags)));
    }
    let Roles { numlist, person: p, collection: (coll_name, coll_type), result } = roles(e1, registry).map_err(RedescribeError::NotE1)?;
    let mut report = PhaseReport::new(Phase::P2, vec![e1.name.clone()]);
    report.rule("widen", format!("{coll_type} {coll_name} -> objectSet object_set"));
    report.rule("hoist", format!("const intList {numlist} -> Globals, declared friend"));
    report.rule("split", "Counting -> Index, OneToOneMap, GetResult and a driver Counting");
    report.rule("publish", "operations public, attributes protected");
    report.rule("synthesize_fetch", "FetchObjects(objects, k) from the counting core");
    for a in e1.attributes.iter().filter(|a| a.is_const() && a.name != numlist) {
        report.drop(a.name.clone(), "incidental, not needed to count any objects");
    }
    for op in &e1.operations {
        walk_statements(&op.body, &mut |s| {
            if let Statement::Action(AtomicAction::Verb { verb: Verb::Move, arg, .. }) = s {
                let what = format!("Move({})", crate::dsl::print_expr(arg));
                if !report.dropped.iter().any(|(w, _)| *w == what) {
                    report.drop(what, "incidental action");
                }
            }
        });
    }

    let globals = format!("const intList {numlist};\n");
    let class = format!(
        "@level(E2)
@domain(numbers)
class Counting {{
protected:
    friend {numlist};
    Person {p};
    objectSet object_set;
    List object_list;
    int {result};
public:
    void Index(objectSet objects) {{
        object_list = [];
        while (!objects.Empty()) {{
            Object an_object;
            an_object = objects.SelectOneRandom();
            object_list.Append(an_object);
            objects.Delete(an_object);
        }}
    }}
    void OneToOneMap(List objects) {{
        {result} = 0;
        {p}.PointTo(objects.First());
        {p}.Say({numlist}.First());
        {result}++;
        while (objects.Next() != NULL) {{
            {p}.PointTo(objects.Next());
            {p}.Say({numlist}.Next());
            {result}++;
        }}
    }}
    int GetResult() {{
        return {result};
    }}
    int Counting() {{
        Index(object_set);
        OneToOneMap(object_list);
        return GetResult();
    }}
    void FetchObjects(objectSet objects, int k) {{
        object_set = objects;
        Counting();
        if (GetResult() < k) {{
            {p}.Say(\"Error\");
        }} else {{
            int i;
            i = 0;
            while (i < k) {{
                Object an_object;
                an_object = objects.SelectOneRandom();
                {p}.TakeAway(an_object);
                objects.Delete(an_object);
                i++;
            }}
        }}
    }}
}}
"
    );
    let mut units = synthesize(&globals).map_err(RedescribeError::NotE1)?;
    units.extend(synthesize(&class).map_err(RedescribeError::NotE1)?);
    report.outputs = units.iter().map(|u| u.name.clone()).collect();
    Ok((units, report))
}

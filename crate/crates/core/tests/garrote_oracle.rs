mod common;

#[test]
fn endpoints_and_two_variable_grid() {
    let failures: Vec<String> = (0..40).filter_map(|seed| common::check_garrote_instance(seed).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

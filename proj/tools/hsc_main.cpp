// Placeholder until the CLI lands; keeps the build wired end to end.
int main() { return 0; }

// Placeholder until the harness lands; replaced by the real CLI below.
int main() { return 0; }

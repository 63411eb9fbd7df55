#include <stdio.h>

int next_id(void) {
    static int counter = 0;
    counter++;
    return counter;
}

int main(void) {
    int a = next_id();
    int b = next_id();
    printf("%d %d\n", a, b);
    return 0;
}

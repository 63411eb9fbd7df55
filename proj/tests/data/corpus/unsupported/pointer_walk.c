#include <stdio.h>

int sum(int *p, int n) {
    int s = 0;
    for (int i = 0; i < n; i++)
        s += *(p + i);
    return s;
}

int main(void) {
    int arr[4] = {1, 2, 3, 4};
    int *end = arr + 4;
    printf("%d %d\n", sum(arr, 4), *(end - 1));
    return 0;
}

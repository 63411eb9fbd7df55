#include <stdio.h>

#define CAP 32

int heap[CAP];
int size = 0;

void swap(int *x, int *y) {
    int t = *x;
    *x = *y;
    *y = t;
}

int parent(int i) { return (i - 1) / 2; }

void push(int v) {
    if (size == CAP) {
        printf("overflow\n");
        return;
    }
    int i = size;
    heap[i] = v;
    size++;
    while (i != 0 && heap[parent(i)] > heap[i]) {
        swap(&heap[i], &heap[parent(i)]);
        i = parent(i);
    }
}

void heapify(int i) {
    int l = 2 * i + 1;
    int r = 2 * i + 2;
    int smallest = i;
    if (l < size && heap[l] < heap[smallest])
        smallest = l;
    if (r < size && heap[r] < heap[smallest])
        smallest = r;
    if (smallest != i) {
        swap(&heap[i], &heap[smallest]);
        heapify(smallest);
    }
}

int pop(void) {
    if (size <= 0)
        return -1;
    int root = heap[0];
    size--;
    heap[0] = heap[size];
    heapify(0);
    return root;
}

int main(void) {
    push(3);
    push(2);
    push(15);
    push(5);
    push(4);
    push(45);
    while (size > 0)
        printf("%d ", pop());
    return 0;
}
